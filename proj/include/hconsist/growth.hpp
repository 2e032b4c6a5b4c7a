#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hconsist/aux_function.hpp"
#include "hconsist/transform.hpp"

namespace hc {

struct GrowthFit {
    std::vector<double> t_grid;
    std::vector<double> T_values;
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // in log space
    int envelope_power = 2;     // round(slope)
    double c = 0.0;             // min T(t) / t^power on the grid
    double C = 0.0;             // max T(t) / t^power on the grid

    double fitted(std::size_t i) const;
};

/// Least squares of log T against log t on a log-spaced grid.
GrowthFit fit_growth(const std::function<double(double)>& T, double t_min = 1e-4, double t_max = 1e-2,
                     int points = 41);
GrowthFit fit_growth(const TransformCurve& curve, double t_min = 1e-4, double t_max = 1e-2, int points = 41);

/// Growth-curve catalog: binary_logistic, binary_exp, binary_sq_hinge, comp_sum_tau1,
/// cstnd_exp (smooth); binary_hinge, binary_rho, mae, cstnd_hinge (polyhedral).
std::function<double(double)> growth_curve(const std::string& id);
std::vector<std::string> growth_curve_ids(bool smooth);

struct Trajectory {
    std::vector<double> t;
    std::vector<double> a_star;
    double expected_ratio = 0.0;  // Psi'(0) / Psi''(0)
};

/// Minimizers a*_t of f_t(u) = (1-t)/2 Psi(u) + (1+t)/2 Psi(-u) with the
/// nondecreasing orientation Psi(u) = Phi(-u) of the catalog entry.
Trajectory minimizer_trajectory(const AuxiliaryFunction& phi, const std::vector<double>& t_grid);

} // namespace hc
