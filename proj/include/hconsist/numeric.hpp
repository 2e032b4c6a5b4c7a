#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace hc {

using Fn1 = std::function<double(double)>;

struct MinResult {
    double x;
    double f;
};

/// Golden-section minimisation of a unimodal f on [a, b].
/// Endpoints are compared too, so optima sitting on the boundary are exact.
/// Non-finite evaluations are treated as +inf.
MinResult golden_section(const Fn1& f, double a, double b, double xtol = 1e-12, int max_iter = 400);

/// Uniform grid on [a, b] with `points` nodes followed by a golden-section pass
/// on the two cells around the grid argmin.
MinResult grid_then_golden(const Fn1& f, double a, double b, int points, double xtol = 1e-12);

/// Minimise a convex f on the real line. The bracket [-L, L] doubles from
/// `start` until the secant slopes at both ends point outward, capped at 2^40.
/// Throws BracketFailure when the cap is reached.
MinResult minimize_convex_line(const Fn1& f, double start = 1.0, double xtol = 1e-12);

/// Bisection for the preimage of `target` under a nondecreasing f on [lo, hi].
double bisect_increasing(const Fn1& f, double target, double lo, double hi, int iterations = 80);

/// Kahan-compensated running sum.
class KahanSum {
public:
    void add(double v) {
        double y = v - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }
    KahanSum& operator+=(double v) { add(v); return *this; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);

inline double safe_value(double v) {
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

/// Midpoint-convexity check on a grid over [a, b].
bool midpoint_convex(const Fn1& f, double a, double b, int points = 1000, double tol = 1e-9);

} // namespace hc
