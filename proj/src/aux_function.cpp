#include "hconsist/aux_function.hpp"

#include <cmath>
#include <limits>

#include "hconsist/error.hpp"

namespace hc::phi {

namespace {

// log(1 + e^{-t}) without overflow for large negative t.
double softplus_neg(double t) {
    return std::log1p(std::exp(-std::abs(t))) + std::max(-t, 0.0);
}

double logistic_sigma(double t) {  // 1 / (1 + e^{t})
    if (t >= 0) {
        double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

AuxiliaryFunction make(PhiId id, std::string name, AuxFlags flags, double lo, double hi) {
    AuxiliaryFunction f;
    f.id = id;
    f.name = std::move(name);
    f.flags = flags;
    f.domain_lo = lo;
    f.domain_hi = hi;
    return f;
}

} // namespace

AuxiliaryFunction hinge() {
    auto f = make(PhiId::hinge, "hinge", {true, true, false}, -50, 50);
    f.value = [](double t) { return std::max(0.0, 1.0 - t); };
    f.derivative = [](double t) { return t < 1.0 ? -1.0 : 0.0; };
    return f;
}

AuxiliaryFunction logistic(LogBase base) {
    auto f = make(PhiId::logistic2, base == LogBase::two ? "logistic2" : "logistic", {true, true, true},
                  -50, 50);
    f.log_base = base;
    const double s = base == LogBase::two ? 1.0 / std::log(2.0) : 1.0;
    f.value = [s](double t) { return s * softplus_neg(t); };
    f.derivative = [s](double t) { return -s * logistic_sigma(t); };
    f.second_derivative = [s](double t) {
        double a = logistic_sigma(t);
        return s * a * (1.0 - a);
    };
    return f;
}

AuxiliaryFunction exponential() {
    auto f = make(PhiId::exponential, "exp", {true, true, true}, -30, 30);
    f.value = [](double t) { return std::exp(-t); };
    f.derivative = [](double t) { return -std::exp(-t); };
    f.second_derivative = [](double t) { return std::exp(-t); };
    return f;
}

AuxiliaryFunction quadratic() {
    auto f = make(PhiId::quadratic, "sq-hinge", {true, true, false}, -50, 50);
    f.value = [](double t) { return t <= 1.0 ? (1.0 - t) * (1.0 - t) : 0.0; };
    f.derivative = [](double t) { return t <= 1.0 ? -2.0 * (1.0 - t) : 0.0; };
    f.second_derivative = [](double t) { return t <= 1.0 ? 2.0 : 0.0; };
    return f;
}

AuxiliaryFunction sigmoid(double k) {
    if (!(k > 0)) throw DomainError("sigmoid: k must be positive");
    auto f = make(PhiId::sigmoid, "sigmoid", {false, true, true}, -50, 50);
    f.param = k;
    f.value = [k](double t) { return 1.0 - std::tanh(k * t); };
    f.derivative = [k](double t) {
        double c = std::cosh(k * t);
        return -k / (c * c);
    };
    f.second_derivative = [k](double t) {
        double c = std::cosh(k * t);
        return 2.0 * k * k * std::tanh(k * t) / (c * c);
    };
    return f;
}

AuxiliaryFunction rho_margin(double rho) {
    if (!(rho > 0)) throw DomainError("rho_margin: rho must be positive");
    auto f = make(PhiId::rho_margin, "rho", {false, true, false}, -50, 50);
    f.param = rho;
    f.value = [rho](double t) { return std::min(1.0, std::max(0.0, 1.0 - t / rho)); };
    f.derivative = [rho](double t) { return (t > 0 && t < rho) ? -1.0 / rho : 0.0; };
    return f;
}

AuxiliaryFunction neg_log() {
    auto f = make(PhiId::neg_log, "neg_log", {true, true, true}, 0.0, 1.0);
    f.value = [](double u) { return u > 0 ? -std::log(u) : std::numeric_limits<double>::infinity(); };
    f.derivative = [](double u) { return -1.0 / u; };
    f.second_derivative = [](double u) { return 1.0 / (u * u); };
    return f;
}

AuxiliaryFunction inv_minus_one() {
    auto f = make(PhiId::inv_minus_one, "inv_minus_one", {true, true, true}, 0.0, 1.0);
    f.value = [](double u) { return u > 0 ? 1.0 / u - 1.0 : std::numeric_limits<double>::infinity(); };
    f.derivative = [](double u) { return -1.0 / (u * u); };
    f.second_derivative = [](double u) { return 2.0 / (u * u * u); };
    return f;
}

AuxiliaryFunction gen_ce(double q) {
    if (!(q > 0 && q < 1)) throw DomainError("gen_ce: q must lie in (0, 1)");
    auto f = make(PhiId::gen_ce, "gen_ce", {true, true, true}, 0.0, 1.0);
    f.param = q;
    f.value = [q](double u) { return (1.0 - std::pow(std::max(u, 0.0), q)) / q; };
    f.derivative = [q](double u) { return -std::pow(u, q - 1.0); };
    f.second_derivative = [q](double u) { return (1.0 - q) * std::pow(u, q - 2.0); };
    return f;
}

AuxiliaryFunction one_minus() {
    auto f = make(PhiId::one_minus, "one_minus", {true, true, true}, 0.0, 1.0);
    f.value = [](double u) { return 1.0 - u; };
    f.derivative = [](double) { return -1.0; };
    f.second_derivative = [](double) { return 0.0; };
    return f;
}

AuxiliaryFunction squared() {
    // Nonincreasing on its comp-sum domain [0, 1]; used on all of R by the
    // constrained family.
    auto f = make(PhiId::squared, "squared", {true, true, true}, -50.0, 1.0);
    f.value = [](double u) { return (1.0 - u) * (1.0 - u); };
    f.derivative = [](double u) { return -2.0 * (1.0 - u); };
    f.second_derivative = [](double) { return 2.0; };
    return f;
}

AuxiliaryFunction custom(std::string name, std::function<double(double)> value, AuxFlags flags,
                         double domain_lo, double domain_hi, std::function<double(double)> derivative,
                         std::function<double(double)> second_derivative) {
    if (!value) throw DomainError("custom auxiliary function needs a value callable");
    auto f = make(PhiId::custom, std::move(name), flags, domain_lo, domain_hi);
    f.value = std::move(value);
    f.derivative = std::move(derivative);
    f.second_derivative = std::move(second_derivative);
    return f;
}

AuxiliaryFunction by_name(const std::string& name, double param, LogBase base) {
    if (name == "hinge") return hinge();
    if (name == "logistic2" || name == "logistic") return logistic(base);
    if (name == "exp" || name == "exponential") return exponential();
    if (name == "sq-hinge" || name == "quadratic") return quadratic();
    if (name == "sigmoid") return sigmoid(param);
    if (name == "rho" || name == "rho_margin") return rho_margin(param);
    if (name == "neg_log") return neg_log();
    if (name == "inv_minus_one") return inv_minus_one();
    if (name == "gen_ce") return gen_ce(param);
    if (name == "one_minus") return one_minus();
    if (name == "squared") return squared();
    throw DomainError("unknown auxiliary function: " + name);
}

bool is_margin_entry(const AuxiliaryFunction& f) {
    switch (f.id) {
    case PhiId::hinge:
    case PhiId::logistic2:
    case PhiId::exponential:
    case PhiId::quadratic:
    case PhiId::sigmoid:
    case PhiId::rho_margin:
        return true;
    default:
        return false;
    }
}

} // namespace hc::phi
