#include "hconsist/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hconsist/error.hpp"
#include "hconsist/numeric.hpp"

namespace hc {

void SolverConfig::validate() const {
    if (tau_grid_size < 16 || P_grid_size < 2 || refine_iterations < 1)
        throw DomainError("solver config: grid sizes must be >= 16");
    if (!(mu_tolerance > 0)) throw DomainError("solver config: tolerances must be positive");
}

namespace {

void check_t(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("solver: t must lie in [0, 1]");
}

void require_convex(const AuxiliaryFunction& phi, double lo, double hi) {
    if (!phi.value) throw DomainError("solver: auxiliary function has no value");
    if (!phi.flags.convex || !midpoint_convex(phi.value, lo, hi, 1000, 1e-9))
        throw Unsupported("solver: " + phi.name + " is not convex; no inf-sup characterization");
}

// Grid on [a, b] then golden-section on the cells around the best node.
MinResult outer_min(const Fn1& f, double a, double b, const SolverConfig& cfg) {
    if (b - a <= 0) return {a, f(a)};
    auto grid = linspace(a, b, cfg.tau_grid_size);
    std::size_t best = 0;
    double fb = safe_value(f(grid[0]));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double v = safe_value(f(grid[i]));
        if (v < fb) {
            fb = v;
            best = i;
        }
    }
    double lo = grid[best == 0 ? 0 : best - 1];
    double hi = grid[std::min(best + 1, grid.size() - 1)];
    auto r = golden_section(f, lo, hi, 1e-14, cfg.refine_iterations);
    return r.f <= fb ? r : MinResult{grid[best], fb};
}

// inf over mu in [lo, hi] of a convex inner objective.
MinResult inner_min(const Fn1& g, double lo, double hi, const SolverConfig& cfg) {
    if (hi - lo <= 0) return {lo, g(lo)};
    return golden_section(g, lo, hi, cfg.mu_tolerance, 400);
}

// Comp-sum objective with tau_1 = tau_2 = tau:
//   sup_mu (P+t)/2 [Phi(tau) - Phi(tau-mu)] + (P-t)/2 [Phi(tau) - Phi(tau+mu)].
struct CompObjective {
    const AuxiliaryFunction& phi;
    double t;
    double P;
    double mu_at = 0.0;

    double operator()(double tau, double mu_lo, double mu_hi, const SolverConfig& cfg) {
        auto g = [&](double mu) {
            return (P + t) / 2.0 * phi(tau - mu) + (P - t) / 2.0 * phi(tau + mu);
        };
        auto r = inner_min(g, mu_lo, mu_hi, cfg);
        mu_at = r.x;
        return P * phi(tau) - r.f;
    }
};

SolveResult comp_solve(const AuxiliaryFunction& phi, double t, double tau_lo, double tau_hi,
                       const std::function<std::pair<double, double>(double)>& mu_range, double P_lo,
                       const SolverConfig& cfg) {
    auto solve_at_P = [&](double P) {
        CompObjective obj{phi, t, P};
        auto f = [&](double tau) {
            auto [a, b] = mu_range(tau);
            return obj(tau, a, b, cfg);
        };
        auto r = outer_min(f, tau_lo, tau_hi, cfg);
        SolveResult s;
        s.tau_star = r.x;
        auto [a, b] = mu_range(r.x);
        s.value = std::max(0.0, obj(r.x, a, b, cfg));
        s.mu_star = obj.mu_at;
        s.P_star = P;
        return s;
    };

    if (cfg.P_handling == PHandling::analytic_endpoint || P_lo >= 1.0) return solve_at_P(1.0);
    SolveResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (double P : linspace(P_lo, 1.0, cfg.P_grid_size)) {
        auto s = solve_at_P(P);
        if (s.value < best.value) best = s;
    }
    return best;
}

} // namespace

// ---------------------------------------------------------------- comp-sum

SolveResult solve_comp_transform_detail(const AuxiliaryFunction& phi, int n, double t, const SolverConfig& cfg) {
    cfg.validate();
    check_t(t);
    if (n < 2) throw DomainError("solver: n must be at least 2");
    require_convex(phi, 0.01, 1.0);
    if (!(phi(0.5 + 1e-4) < phi(0.5 - 1e-4)))
        throw Unsupported("solver: comp-sum characterization needs Phi decreasing at 1/2");

    auto mu_range = [](double tau) { return std::pair{-tau, tau}; };
    double P_lo = std::max(1.0 / (n - 1), t);
    return comp_solve(phi, t, 1.0 / n, 0.5, mu_range, P_lo, cfg);
}

double solve_comp_transform(const AuxiliaryFunction& phi, int n, double t, const SolverConfig& cfg) {
    return solve_comp_transform_detail(phi, n, t, cfg).value;
}

SolveResult solve_bounded_comp_transform_detail(const AuxiliaryFunction& phi, const HypothesisClassSpec& cls,
                                                double t, const SolverConfig& cfg) {
    cfg.validate();
    check_t(t);
    const int n = cls.n;
    if (n < 2) throw DomainError("solver: n must be at least 2");
    const double s = cls.s_min(), S = cls.s_max();
    if (!(S > s)) throw DomainError("bounded solver: s_min must be below s_max");
    require_convex(phi, std::max(0.01, s), 1.0);

    const double tau_lo = std::max(1.0 / n, s), tau_hi = std::min(0.5, S);
    if (tau_lo > tau_hi || s + S > 1.0 + 1e-12) throw DomainError("bounded solver: empty constraint set");
    auto mu_range = [s, S](double tau) {
        double lo = std::max(s - tau, tau - S), hi = std::min(S - tau, tau - s);
        return std::pair{lo, std::max(lo, hi)};
    };
    double P_lo = std::max(1.0 / (n - 1), t);
    return comp_solve(phi, t, tau_lo, tau_hi, mu_range, P_lo, cfg);
}

double solve_bounded_comp_transform(const AuxiliaryFunction& phi, const HypothesisClassSpec& cls, double t,
                                    const SolverConfig& cfg) {
    return solve_bounded_comp_transform_detail(phi, cls, t, cfg).value;
}

// ---------------------------------------------------------------- constrained

SolveResult solve_cstnd_transform_detail(const AuxiliaryFunction& phi, int n, double t, double tau_cap,
                                         const SolverConfig& cfg) {
    cfg.validate();
    check_t(t);
    if (n < 2) throw DomainError("solver: n must be at least 2");
    if (!(tau_cap > 0)) throw DomainError("solver: tau_cap must be positive");
    require_convex(phi, -5.0, 5.0);

    auto solve_at_c = [&](double c) {
        double mu_at = 0.0;
        auto f = [&](double tau) {
            auto g = [&](double mu) {
                return (c - t) / 2.0 * phi(-tau + mu) + (c + t) / 2.0 * phi(-tau - mu);
            };
            auto r = minimize_convex_line(g, 1.0, cfg.mu_tolerance);
            mu_at = r.x;
            return c * phi(-tau) - r.f;
        };
        auto r = outer_min(f, 0.0, tau_cap, cfg);
        SolveResult out;
        out.tau_star = r.x;
        out.value = std::max(0.0, f(r.x));
        out.mu_star = mu_at;
        out.P_star = 2.0 - c;
        return out;
    };

    const double P_exact = 1.0 / (n - 1);
    if (cfg.P_handling == PHandling::grid) {
        SolveResult best;
        best.value = std::numeric_limits<double>::infinity();
        for (double P : linspace(P_exact, 1.0, cfg.P_grid_size)) {
            auto s = solve_at_c(2.0 - P);
            if (s.value < best.value) best = s;
        }
        return best;
    }
    return solve_at_c(cfg.cstnd_form == CstndForm::lower_bound ? 2.0 : 2.0 - P_exact);
}

double solve_cstnd_transform(const AuxiliaryFunction& phi, int n, double t, double tau_cap,
                             const SolverConfig& cfg) {
    return solve_cstnd_transform_detail(phi, n, t, tau_cap, cfg).value;
}

double solve_bounded_cstnd_transform(const AuxiliaryFunction& phi, const HypothesisClassSpec& cls, double t,
                                     const SolverConfig& cfg) {
    cfg.validate();
    check_t(t);
    const double L = cls.Lambda_min();
    if (!(L > 0) || std::isinf(L)) throw DomainError("bounded solver: finite Lambda_min > 0 required");
    require_convex(phi, -5.0, 5.0);

    // With nu = mu - tau the objective separates into f(tau) - inf_{|nu| <= L} f(nu).
    auto f = [&](double x) { return (1.0 - t) / 2.0 * phi(x) + (1.0 + t) / 2.0 * phi(-x); };
    double inner = grid_then_golden(f, -L, L, 257, cfg.mu_tolerance).f;
    double outer = outer_min(f, 0.0, L, cfg).f;
    return std::max(0.0, outer - inner);
}

// ---------------------------------------------------------------- binary

double binary_transform_from_phi(const AuxiliaryFunction& phi, double t, bool complete, double B) {
    check_t(t);
    require_convex(phi, -5.0, 5.0);
    auto f = [&](double u) { return (1.0 - t) / 2.0 * phi(u) + (1.0 + t) / 2.0 * phi(-u); };
    double inf_f;
    if (complete || std::isinf(B)) {
        try {
            inf_f = minimize_convex_line(f, 1.0, 1e-12).f;
        } catch (const BracketFailure& e) {
            // The infimum sits at infinity (t = 1); take the limit value.
            double L = e.largest_bracket;
            inf_f = std::min(safe_value(f(L)), safe_value(f(-L)));
        }
    } else {
        if (!(B > 0)) throw DomainError("binary transform: B must be positive");
        inf_f = grid_then_golden(f, -B, B, 257, 1e-12).f;
    }
    return std::max(0.0, f(0.0) - inf_f);
}

} // namespace hc
