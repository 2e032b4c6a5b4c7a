#include "hconsist/growth.hpp"

#include <algorithm>
#include <cmath>

#include "hconsist/error.hpp"
#include "hconsist/numeric.hpp"
#include "hconsist/solver.hpp"

namespace hc {

double GrowthFit::fitted(std::size_t i) const {
    return std::exp(intercept + slope * std::log(t_grid.at(i)));
}

GrowthFit fit_growth(const std::function<double(double)>& T, double t_min, double t_max, int points) {
    if (!(t_min > 0 && t_min < t_max && t_max <= 0.1)) throw DomainError("growth: need 0 < t_min < t_max <= 0.1");
    if (points < 10) throw DomainError("growth: at least 10 grid points");

    GrowthFit g;
    g.t_grid = logspace(t_min, t_max, points);
    g.T_values.resize(g.t_grid.size());
    for (std::size_t i = 0; i < g.t_grid.size(); ++i) {
        double v = T(g.t_grid[i]);
        if (!(v > 0)) throw DomainError("growth: T is not positive at t = " + std::to_string(g.t_grid[i]));
        g.T_values[i] = v;
    }

    const double m = static_cast<double>(points);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < g.t_grid.size(); ++i) {
        double x = std::log(g.t_grid[i]), y = std::log(g.T_values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    g.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    g.intercept = (sy - g.slope * sx) / m;

    g.envelope_power = static_cast<int>(std::lround(g.slope));
    g.c = std::numeric_limits<double>::infinity();
    g.C = 0.0;
    for (std::size_t i = 0; i < g.t_grid.size(); ++i) {
        double x = std::log(g.t_grid[i]), y = std::log(g.T_values[i]);
        g.max_residual = std::max(g.max_residual, std::abs(y - (g.intercept + g.slope * x)));
        double ratio = g.T_values[i] / std::pow(g.t_grid[i], g.envelope_power);
        g.c = std::min(g.c, ratio);
        g.C = std::max(g.C, ratio);
    }
    return g;
}

GrowthFit fit_growth(const TransformCurve& curve, double t_min, double t_max, int points) {
    return fit_growth([&](double t) { return curve.eval(t); }, t_min, t_max, points);
}

std::function<double(double)> growth_curve(const std::string& id) {
    auto from_phi = [](AuxiliaryFunction phi) {
        return [phi](double t) { return binary_transform_from_phi(phi, t); };
    };
    auto from_curve = [](TransformCurve c) { return [c](double t) { return c.eval(t); }; };

    if (id == "binary_logistic") return from_phi(phi::logistic(LogBase::natural));
    if (id == "binary_exp") return from_phi(phi::exponential());
    if (id == "binary_sq_hinge") return from_phi(phi::quadratic());
    if (id == "comp_sum_tau1") return from_curve(comp_sum_transform(1.0, 2));
    if (id == "cstnd_exp") return from_curve(multiclass_table_transform(TableFamily::cstnd_phi, "exp"));
    if (id == "binary_hinge") return from_curve(binary_linear_transform("hinge", 1.0));
    if (id == "binary_rho") return from_curve(binary_linear_transform("rho", 1.0, 1.0));
    if (id == "mae") return from_curve(comp_sum_transform(2.0, 2));
    if (id == "cstnd_hinge") return from_curve(multiclass_table_transform(TableFamily::cstnd_phi, "hinge"));
    throw DomainError("unknown growth curve: " + id);
}

std::vector<std::string> growth_curve_ids(bool smooth) {
    if (smooth) return {"binary_logistic", "binary_exp", "binary_sq_hinge", "comp_sum_tau1", "cstnd_exp"};
    return {"binary_hinge", "binary_rho", "mae", "cstnd_hinge"};
}

Trajectory minimizer_trajectory(const AuxiliaryFunction& phi, const std::vector<double>& t_grid) {
    // Psi(u) = Phi(-u): the only place the two orientations meet.
    auto psi = [&phi](double u) { return phi(-u); };
    double d1, d2;
    if (phi.has_derivative() && phi.has_second_derivative()) {
        d1 = -phi.derivative(0.0);
        d2 = phi.second_derivative(0.0);
    } else {
        const double h = 1e-4;
        d1 = (psi(h) - psi(-h)) / (2 * h);
        d2 = (psi(h) - 2 * psi(0.0) + psi(-h)) / (h * h);
    }
    if (!(d2 > 0)) throw DomainError("minimizer trajectory: " + phi.name + " needs positive curvature at 0");

    Trajectory tr;
    tr.expected_ratio = d1 / d2;
    for (double t : t_grid) {
        if (!(t >= 0 && t < 1)) throw DomainError("minimizer trajectory: t must lie in [0, 1)");
        auto f = [&](double u) { return (1.0 - t) / 2.0 * psi(u) + (1.0 + t) / 2.0 * psi(-u); };
        double a = t == 0.0 ? 0.0 : minimize_convex_line(f, 1.0, 1e-13).x;
        tr.t.push_back(t);
        tr.a_star.push_back(a);
    }
    return tr;
}

} // namespace hc
