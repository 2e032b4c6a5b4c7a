#include "hconsist/numeric.hpp"

#include <algorithm>

#include "hconsist/error.hpp"

namespace hc {

namespace {
constexpr double kInvPhi = 0.6180339887498949; // (sqrt(5) - 1) / 2
}

MinResult golden_section(const Fn1& f, double a, double b, double xtol, int max_iter) {
    if (b < a) std::swap(a, b);
    auto g = [&](double x) { return safe_value(f(x)); };
    MinResult best{a, g(a)};
    double fb = g(b);
    if (fb < best.f) best = {b, fb};
    if (b - a <= xtol) return best;

    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = g(c), fd = g(d);
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = g(d);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = g(xm);
    for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{xm, fm}})
        if (v < best.f) best = {x, v};
    return best;
}

MinResult grid_then_golden(const Fn1& f, double a, double b, int points, double xtol) {
    if (points < 2 || b <= a) return golden_section(f, a, b, xtol);
    const double h = (b - a) / (points - 1);
    int arg = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        double v = safe_value(f(a + h * i));
        if (v < fbest) {
            fbest = v;
            arg = i;
        }
    }
    double lo = a + h * std::max(arg - 1, 0);
    double hi = a + h * std::min(arg + 1, points - 1);
    MinResult r = golden_section(f, lo, hi, xtol);
    if (fbest < r.f) r = {a + h * arg, fbest};
    return r;
}

MinResult minimize_convex_line(const Fn1& f, double start, double xtol) {
    auto g = [&](double x) { return safe_value(f(x)); };
    const double cap = std::ldexp(1.0, 40);
    double L = start;
    for (;;) {
        bool right_ok = g(L) >= g(0.5 * L);
        bool left_ok = g(-L) >= g(-0.5 * L);
        if (right_ok && left_ok) break;
        if (L >= cap) throw BracketFailure("inner minimisation did not bracket", L);
        L *= 2.0;
    }
    return grid_then_golden(f, -L, L, 257, xtol);
}

double bisect_increasing(const Fn1& f, double target, double lo, double hi, int iterations) {
    for (int i = 0; i < iterations; ++i) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    out[n - 1] = b;
    return out;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> out = linspace(std::log(a), std::log(b), n);
    for (auto& v : out) v = std::exp(v);
    return out;
}

bool midpoint_convex(const Fn1& f, double a, double b, int points, double tol) {
    auto xs = linspace(a, b, points);
    for (int i = 0; i + 2 < points; ++i) {
        double l = f(xs[i]), m = f(xs[i + 1]), r = f(xs[i + 2]);
        if (!std::isfinite(l) || !std::isfinite(m) || !std::isfinite(r)) continue;
        double scale = std::max({1.0, std::abs(l), std::abs(r)});
        if (m > 0.5 * (l + r) + tol * scale) return false;
    }
    return true;
}

} // namespace hc
