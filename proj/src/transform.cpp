#include "hconsist/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hconsist/error.hpp"
#include "hconsist/numeric.hpp"

namespace hc {

namespace {

constexpr double kDomainSlack = 1e-9;

// x log x with the 0 log 0 = 0 convention.
double xlogx(double x) {
    return x > 0 ? x * std::log(x) : 0.0;
}

// log(1 + e^x) for any x.
double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log of ((1+b)^{1/r} + (1-b)^{1/r}) / 2)^r, r > 0.
double log_power_mean(double beta, double r) {
    double a = std::log1p(beta) / r;
    double c = beta >= 1.0 ? -std::numeric_limits<double>::infinity() : std::log1p(-beta) / r;
    return r * (logaddexp(a, c) - std::log(2.0));
}

// (1+t)/2 log(1+t) + (1-t)/2 log(1-t), natural log.
double entropy_gap(double t) {
    return 0.5 * (xlogx(1.0 + t) + xlogx(1.0 - t));
}

double one_minus_sqrt(double t) {
    return 1.0 - std::sqrt(std::max(0.0, 1.0 - t * t));
}

TransformCurve make_curve(std::string name, std::string tag, std::function<double(double)> fn) {
    TransformCurve c;
    c.name = std::move(name);
    c.source_tag = std::move(tag);
    c.fn = std::move(fn);
    return c;
}

void set_closed_inverse(TransformCurve& c, std::function<double(double)> inv) {
    c.closed_inverse = std::move(inv);
    c.inverse_mode = InverseMode::closed_form;
}

std::string canonical_binary_id(const std::string& id) {
    if (id == "logistic2") return "logistic";
    if (id == "exponential") return "exp";
    if (id == "sq-hinge") return "quadratic";
    if (id == "rho_margin") return "rho";
    return id;
}

} // namespace

// ---------------------------------------------------------------- curve

double TransformCurve::eval(double t) const {
    if (!(t >= -kDomainSlack && t <= 1.0 + kDomainSlack))
        throw DomainError(name + ": argument outside [0, 1]");
    return fn(std::clamp(t, 0.0, 1.0));
}

double TransformCurve::inverse(double s) const {
    if (s < -1e-12 || std::isnan(s)) throw DomainError(name + ": inverse needs s >= 0");
    s = std::max(s, 0.0);
    switch (inverse_mode) {
    case InverseMode::closed_form:
        if (closed_inverse) return closed_inverse(s);
        break;
    case InverseMode::relaxed_upper:
        if (relaxed_inverse) return relaxed_inverse(s);
        break;
    case InverseMode::bisection:
        break;
    }
    if (s >= fn(1.0)) return 1.0;
    // T(0) = 0, so Gamma(0) = 0 even where rounding flattens T near the origin.
    if (s == 0.0 && flags.zero_at_zero) return 0.0;
    return bisect_increasing(fn, s, 0.0, 1.0, 80);
}

CertificateReport TransformCurve::certify(int points) const {
    CertificateReport r;
    auto grid = linspace(0.0, 1.0, points);
    if (flags.zero_at_zero) r.zero_at_zero = std::abs(fn(0.0)) <= 1e-12;
    if (flags.nondecreasing) {
        double prev = fn(grid[0]);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            double v = fn(grid[i]);
            if (v < prev - 1e-12 * std::max(1.0, std::abs(prev))) r.nondecreasing = false;
            prev = v;
        }
    }
    if (flags.convex) r.convex = midpoint_convex(fn, 0.0, 1.0, points, 1e-9);

    const double top = fn(1.0);
    for (double u : grid) {
        double s = u * top;
        double g = inverse(s);
        if (inverse_mode == InverseMode::relaxed_upper) {
            // An upper bound on Gamma: T(min(g, 1)) must reach s unless g saturates.
            if (g < 1.0 && fn(std::max(g, 0.0)) < s - 1e-8) r.inverse_roundtrip = false;
            continue;
        }
        if (g > 1.0) continue;  // closed forms extend past T(1)
        double res = std::abs(fn(std::clamp(g, 0.0, 1.0)) - s);
        r.max_inverse_residual = std::max(r.max_inverse_residual, res);
        if (res > 1e-8) r.inverse_roundtrip = false;
    }
    return r;
}

TransformCurve linear_curve(double coef, std::string name, std::string tag) {
    if (!(coef > 0)) throw DomainError(name + ": linear coefficient must be positive");
    auto c = make_curve(std::move(name), std::move(tag), [coef](double t) { return coef * t; });
    set_closed_inverse(c, [coef](double s) { return s / coef; });
    return c;
}

// ---------------------------------------------------------------- binary

TransformCurve binary_linear_transform(const std::string& loss_id, double B, double extra, bool relaxed_inverse) {
    if (!(B > 0)) throw DomainError("binary transform: B must be positive");
    const std::string id = canonical_binary_id(loss_id);
    const std::string tag = "binary-linear/" + id;

    if (id == "hinge") return linear_curve(std::min(B, 1.0), "hinge", tag);
    if (id == "sigmoid") {
        if (!(extra > 0)) throw DomainError("sigmoid transform: k must be positive");
        return linear_curve(std::tanh(extra * B), "sigmoid", tag);
    }
    if (id == "rho") {
        if (!(extra > 0)) throw DomainError("rho transform: rho must be positive");
        return linear_curve(std::min(B, extra) / extra, "rho", tag);
    }
    if (id == "quadratic") {
        auto c = make_curve("quadratic", tag, [B](double t) { return t <= B ? t * t : 2.0 * B * t - B * B; });
        set_closed_inverse(c, [B](double s) { return s <= B * B ? std::sqrt(s) : s / (2.0 * B) + B / 2.0; });
        return c;
    }
    if (id == "logistic" || id == "exp") {
        const bool lg = id == "logistic";
        const double th = lg ? std::tanh(B / 2.0) : std::tanh(B);
        TransformCurve c;
        if (lg) {
            const double inv_ln2 = 1.0 / std::log(2.0);
            const double lo = softplus(-B) * inv_ln2, hi = softplus(B) * inv_ln2;
            c = make_curve("logistic", tag, [=](double t) {
                if (t <= th) return entropy_gap(t) * inv_ln2;
                return 1.0 - (t + 1.0) / 2.0 * lo - (1.0 - t) / 2.0 * hi;
            });
        } else {
            c = make_curve("exp", tag, [=](double t) {
                if (t <= th) return one_minus_sqrt(t);
                return 1.0 - (t + 1.0) / 2.0 * std::exp(-B) - (1.0 - t) / 2.0 * std::exp(B);
            });
        }
        c.relaxed_inverse = [th](double s) {
            return s <= 0.5 * th * th ? std::sqrt(2.0 * s) : 2.0 * s / th;
        };
        if (relaxed_inverse) c.inverse_mode = InverseMode::relaxed_upper;
        return c;
    }
    throw DomainError("binary transform: unknown loss id " + loss_id);
}

TransformCurve binary_nn_transform(const std::string& loss_id, double Lambda, double B, double extra,
                                   bool relaxed_inverse) {
    if (!(Lambda > 0)) throw DomainError("network transform: Lambda must be positive");
    auto c = binary_linear_transform(loss_id, Lambda * B, extra, relaxed_inverse);
    c.source_tag = "binary-nn/" + canonical_binary_id(loss_id);
    return c;
}

// ---------------------------------------------------------------- comp-sum

TransformCurve comp_sum_transform(double tau, int n) {
    if (!(tau >= 0)) throw DomainError("comp-sum transform: tau must be nonnegative");
    if (n < 2) throw DomainError("comp-sum transform: n must be at least 2");
    const std::string tag = "comp-sum/T_tau";
    const double nt = std::pow(static_cast<double>(n), tau - 1.0);

    if (std::abs(tau - 1.0) < 1e-12) return make_curve("comp_sum", tag, entropy_gap);
    if (tau >= 2.0) return linear_curve(1.0 / ((tau - 1.0) * nt), "comp_sum", tag);
    if (tau < 1.0) {
        const double scale = std::pow(2.0, 1.0 - tau) / (1.0 - tau);
        return make_curve("comp_sum", tag, [=](double b) { return -scale * std::expm1(log_power_mean(b, 2.0 - tau)); });
    }
    const double scale = 1.0 / ((tau - 1.0) * nt);
    return make_curve("comp_sum", tag, [=](double b) { return scale * std::expm1(log_power_mean(b, 2.0 - tau)); });
}

PolyBounds comp_sum_poly_bounds(double tau, int n) {
    if (!(tau >= 0)) throw DomainError("comp-sum bounds: tau must be nonnegative");
    if (n < 2) throw DomainError("comp-sum bounds: n must be at least 2");
    const double nt = std::pow(static_cast<double>(n), tau - 1.0);
    PolyBounds pb;
    if (tau >= 2.0) {
        double k = (tau - 1.0) * nt;
        pb.lower = linear_curve(1.0 / k, "comp_sum_poly", "comp-sum/T_tilde");
        pb.inverse_upper = [k](double t) { return k * t; };
        return pb;
    }
    const double k = tau < 1.0 ? std::pow(2.0, tau) * (2.0 - tau) : 2.0 * nt;
    pb.lower = make_curve("comp_sum_poly", "comp-sum/T_tilde", [k](double b) { return b * b / k; });
    pb.inverse_upper = [k](double t) { return std::sqrt(k * t); };
    set_closed_inverse(pb.lower, pb.inverse_upper);
    return pb;
}

// ---------------------------------------------------------------- tables

TableFamily table_family_from_name(const std::string& name) {
    if (name == "comp_sum_phi") return TableFamily::comp_sum_phi;
    if (name == "cstnd_phi") return TableFamily::cstnd_phi;
    if (name == "sum_loss") return TableFamily::sum_loss;
    if (name == "max_rho") return TableFamily::max_rho;
    if (name == "cstnd_basic") return TableFamily::cstnd_basic;
    throw DomainError("unknown table family: " + name);
}

namespace {

TransformCurve square_over(double k, const std::string& name, const std::string& tag) {
    auto c = make_curve(name, tag, [k](double t) { return t * t / k; });
    set_closed_inverse(c, [k](double s) { return std::sqrt(k * s); });
    return c;
}

} // namespace

TransformCurve multiclass_table_transform(TableFamily family, const std::string& phi_id, const TableParams& p) {
    auto unknown = [&]() { return DomainError("table transform: no entry for " + phi_id); };
    switch (family) {
    case TableFamily::comp_sum_phi: {
        const std::string tag = "comp-sum-table/" + phi_id;
        if (p.n < 2) throw DomainError("table transform: n must be at least 2");
        if (phi_id == "neg_log") return make_curve(phi_id, tag, entropy_gap);
        if (phi_id == "inv_minus_one") {
            auto c = make_curve(phi_id, tag, one_minus_sqrt);
            set_closed_inverse(c, [](double s) { return std::sqrt(std::max(0.0, 1.0 - (1.0 - s) * (1.0 - s))); });
            return c;
        }
        if (phi_id == "gen_ce") {
            if (!(p.q > 0 && p.q < 1)) throw DomainError("table transform: q must lie in (0, 1)");
            const double q = p.q, scale = 1.0 / (q * std::pow(static_cast<double>(p.n), q));
            return make_curve(phi_id, tag, [=](double t) { return scale * std::expm1(log_power_mean(t, 1.0 - q)); });
        }
        if (phi_id == "one_minus") return linear_curve(1.0 / p.n, phi_id, tag);
        if (phi_id == "squared") return square_over(4.0, phi_id, tag);
        throw unknown();
    }
    case TableFamily::cstnd_phi: {
        const std::string tag = "cstnd-table/" + phi_id;
        if (phi_id == "exp" || phi_id == "exponential") {
            auto c = make_curve("exp", tag, [](double t) { return 2.0 - std::sqrt(4.0 - t * t); });
            set_closed_inverse(c, [](double s) { return std::sqrt(std::max(0.0, 4.0 - (2.0 - s) * (2.0 - s))); });
            return c;
        }
        if (phi_id == "hinge") return linear_curve(1.0, phi_id, tag);
        if (phi_id == "sq-hinge" || phi_id == "squared") return square_over(2.0, phi_id, tag);
        throw unknown();
    }
    case TableFamily::sum_loss: {
        const std::string tag = "sum-table/" + phi_id;
        if (phi_id == "sq-hinge") return square_over(1.0, phi_id, tag);
        if (phi_id == "exp" || phi_id == "exponential") return square_over(2.0, "exp", tag);
        if (phi_id == "rho") return linear_curve(1.0, phi_id, tag);
        throw unknown();
    }
    case TableFamily::cstnd_basic: {
        const std::string tag = "cstnd-basic/" + phi_id;
        if (phi_id == "hinge" || phi_id == "rho") return linear_curve(1.0, phi_id, tag);
        if (phi_id == "sq-hinge") return square_over(1.0, phi_id, tag);
        if (phi_id == "exp" || phi_id == "exponential") return square_over(2.0, "exp", tag);
        throw unknown();
    }
    case TableFamily::max_rho: {
        if (phi_id != "rho") throw unknown();
        if (!(p.B > 0) || !(p.rho > 0)) throw DomainError("max-rho transform: B, rho > 0 required");
        double eff = p.Lambda ? *p.Lambda * p.B : p.B;
        return linear_curve(std::min(1.0, 2.0 * eff / p.rho), "max_rho", p.Lambda ? "max-rho/nn" : "max-rho/lin");
    }
    }
    throw unknown();
}

TransformCurve adversarial_rho_transform(double B, double rho, std::optional<double> Lambda) {
    if (!(B > 0) || !(rho > 0)) throw DomainError("adversarial rho transform: B, rho > 0 required");
    if (Lambda && !(*Lambda > 0)) throw DomainError("adversarial rho transform: Lambda must be positive");
    double eff = Lambda ? *Lambda * B : B;
    return linear_curve(std::min(eff, rho) / rho, "adv_rho", Lambda ? "adv-rho/nn" : "adv-rho/lin");
}

// ---------------------------------------------------------------- Massart

TransformCurve massart_modified(const TransformCurve& base, double beta, bool adversarial,
                                const std::optional<TransformCurve>& first) {
    if (!(beta > 0 && beta <= 0.5)) throw DomainError("massart: beta must lie in (0, 1/2]");
    auto base_fn = base.fn;
    const double b2 = 2.0 * beta;
    const double slope2 = base_fn(b2) / b2;
    auto piece2 = [=](double t) { return t >= b2 ? base_fn(t) : slope2 * t; };

    TransformCurve c;
    c.name = base.name + (adversarial ? "_massart_adv" : "_massart");
    c.source_tag = base.source_tag + (adversarial ? "+massart-adv" : "+massart");
    c.flags = base.flags;
    if (!adversarial) {
        c.fn = piece2;
        return c;
    }
    std::function<double(double)> hat1 = first ? first->fn : [base_fn](double t) {
        return base_fn(std::max(0.0, 2.0 * t - 1.0));
    };
    const double knot = 0.5 + beta;
    const double slope1 = 2.0 / (1.0 + b2) * hat1(knot);
    c.fn = [=](double t) {
        double p1 = t >= knot ? hat1(t) : slope1 * t;
        return std::min(p1, piece2(t));
    };
    // A minimum of convex pieces need not be convex.
    c.flags.convex = false;
    return c;
}

double massart_adversarial_coefficient(const std::string& loss_id, double B, double beta, double k) {
    if (!(beta > 0 && beta <= 0.5)) throw DomainError("massart: beta must lie in (0, 1/2]");
    if (!(B > 0)) throw DomainError("massart: B must be positive");
    double c;
    if (loss_id == "hinge")
        c = std::min(B, 1.0);
    else if (loss_id == "sigmoid")
        c = std::tanh(k * B);
    else
        throw DomainError("massart coefficient: hinge or sigmoid only");
    return (1.0 + 2.0 * beta) / (4.0 * beta) / c;
}

// ---------------------------------------------------------------- bounded classes

TransformCurve bounded_hypothesis_psi(const std::string& loss_id, const HypothesisClassSpec& cls, double q) {
    const std::string tag = "bounded-psi/" + loss_id;
    if (loss_id == "cstnd_exp") {
        const double L = cls.Lambda_min();
        if (!(L > 0)) throw DomainError("bounded psi: Lambda_min must be positive");
        if (std::isinf(L)) return make_curve(loss_id, tag, one_minus_sqrt);
        const double th = std::tanh(L), sh = std::sinh(L), ch = std::cosh(L);
        return make_curve(loss_id, tag, [=](double t) { return t <= th ? one_minus_sqrt(t) : t * sh + 1.0 - ch; });
    }

    const double s = cls.s_min(), S = cls.s_max();
    if (!(S > s)) throw DomainError("bounded psi: s_min = s_max leaves a zero-width score simplex");

    if (loss_id == "logistic") {
        if (s <= 0) return make_curve(loss_id, tag, entropy_gap);
        const double th = (S - s) / (S + s);
        const double a = 0.5 * std::log(S / s), b = std::log(2.0 * std::sqrt(S * s) / (S + s));
        return make_curve(loss_id, tag, [=](double t) { return t <= th ? entropy_gap(t) : a * t + b; });
    }
    if (loss_id == "sum_exponential") {
        if (s <= 0) return make_curve(loss_id, tag, one_minus_sqrt);
        const double th = (S * S - s * s) / (s * s + S * S);
        const double a = (S - s) / (2.0 * S * s), b = (S - s) * (S - s) / (2.0 * S * s * (S + s));
        return make_curve(loss_id, tag, [=](double t) { return t <= th ? one_minus_sqrt(t) : a * t - b; });
    }
    if (loss_id == "gen_ce") {
        if (!(q > 0 && q < 1)) throw DomainError("bounded psi: q must lie in (0, 1)");
        const double m = (s + S) / 2.0, mq = std::pow(m, q) / q;
        const double th = (std::pow(S, 1 - q) - std::pow(s, 1 - q)) / (std::pow(s, 1 - q) + std::pow(S, 1 - q));
        const double a = (std::pow(S, q) - std::pow(s, q)) / (2.0 * q);
        const double b = ((std::pow(s, q) + std::pow(S, q)) / 2.0 - std::pow(m, q)) / q;
        return make_curve(loss_id, tag, [=](double t) {
            return t <= th ? mq * std::expm1(log_power_mean(t, 1.0 - q)) : a * t + b;
        });
    }
    if (loss_id == "mae") return linear_curve((S - s) / 2.0, loss_id, tag);
    throw DomainError("bounded psi: unknown loss id " + loss_id);
}

} // namespace hc
