#pragma once

#include <limits>

#include "hconsist/aux_function.hpp"
#include "hconsist/risk.hpp"

namespace hc {

enum class PHandling { analytic_endpoint, grid };

/// Which leading constant the constrained objective uses. `lower_bound`
/// replaces 2 - 1/(n-1) by 2, which is the curve tabulated for the common
/// constrained losses; `exact` keeps 2 - 1/(n-1).
enum class CstndForm { lower_bound, exact };

struct SolverConfig {
    int tau_grid_size = 512;
    double mu_tolerance = 1e-10;
    int refine_iterations = 60;
    PHandling P_handling = PHandling::analytic_endpoint;
    CstndForm cstnd_form = CstndForm::lower_bound;
    int P_grid_size = 65;

    void validate() const;
};

struct SolveResult {
    double value = 0.0;
    double tau_star = 0.0;
    double mu_star = 0.0;  // inner argmin at tau_star
    double P_star = 1.0;
};

SolveResult solve_comp_transform_detail(const AuxiliaryFunction& phi, int n, double t, const SolverConfig& cfg = {});
double solve_comp_transform(const AuxiliaryFunction& phi, int n, double t, const SolverConfig& cfg = {});

SolveResult solve_cstnd_transform_detail(const AuxiliaryFunction& phi, int n, double t, double tau_cap = 10.0,
                                         const SolverConfig& cfg = {});
double solve_cstnd_transform(const AuxiliaryFunction& phi, int n, double t, double tau_cap = 10.0,
                             const SolverConfig& cfg = {});

SolveResult solve_bounded_comp_transform_detail(const AuxiliaryFunction& phi, const HypothesisClassSpec& cls,
                                                double t, const SolverConfig& cfg = {});
double solve_bounded_comp_transform(const AuxiliaryFunction& phi, const HypothesisClassSpec& cls, double t,
                                    const SolverConfig& cfg = {});

double solve_bounded_cstnd_transform(const AuxiliaryFunction& phi, const HypothesisClassSpec& cls, double t,
                                     const SolverConfig& cfg = {});

/// f_t(0) - inf_u f_t(u), f_t(u) = (1-t)/2 Phi(u) + (1+t)/2 Phi(-u).
/// With complete = false the search is restricted to |u| <= B.
double binary_transform_from_phi(const AuxiliaryFunction& phi, double t, bool complete = true,
                                 double B = std::numeric_limits<double>::infinity());

} // namespace hc
