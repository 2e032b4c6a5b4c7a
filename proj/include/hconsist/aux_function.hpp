#pragma once

#include <functional>
#include <optional>
#include <string>

namespace hc {

enum class PhiId {
    hinge,
    logistic2,
    exponential,
    quadratic,
    sigmoid,
    rho_margin,
    neg_log,
    inv_minus_one,
    gen_ce,
    one_minus,
    squared,
    custom
};

enum class LogBase { two, natural };

struct AuxFlags {
    bool convex = false;
    bool nonincreasing = true;   // false means nondecreasing
    bool twice_differentiable = false;
};

/// A scalar auxiliary function Phi with optional derivatives.
///
/// Margin-side entries (hinge .. rho_margin) are functions of y*h(x).
/// Comp-sum entries (neg_log .. squared) are functions of the softmax
/// probability of the true label. `squared` doubles as the constrained
/// auxiliary (1 - t)^2.
struct AuxiliaryFunction {
    PhiId id = PhiId::custom;
    std::string name;
    double param = 0.0;  // k for sigmoid, rho for rho_margin, q for gen_ce
    LogBase log_base = LogBase::natural;
    std::function<double(double)> value;
    std::function<double(double)> derivative;         // may be empty
    std::function<double(double)> second_derivative;  // may be empty
    AuxFlags flags;
    double domain_lo = -50.0;
    double domain_hi = 50.0;

    double operator()(double t) const { return value(t); }
    bool has_derivative() const { return static_cast<bool>(derivative); }
    bool has_second_derivative() const { return static_cast<bool>(second_derivative); }
};

namespace phi {

AuxiliaryFunction hinge();
AuxiliaryFunction logistic(LogBase base = LogBase::two);
AuxiliaryFunction exponential();
AuxiliaryFunction quadratic();  // (1 - t)^2 for t <= 1; also the squared hinge
AuxiliaryFunction sigmoid(double k);
AuxiliaryFunction rho_margin(double rho);

AuxiliaryFunction neg_log();
AuxiliaryFunction inv_minus_one();
AuxiliaryFunction gen_ce(double q);
AuxiliaryFunction one_minus();
AuxiliaryFunction squared();

AuxiliaryFunction custom(std::string name, std::function<double(double)> value,
                         AuxFlags flags, double domain_lo, double domain_hi,
                         std::function<double(double)> derivative = {},
                         std::function<double(double)> second_derivative = {});

/// Lookup by catalog name ("hinge", "logistic2", "exp", "sq-hinge", "sigmoid", "rho",
/// "neg_log", "inv_minus_one", "gen_ce", "one_minus", "squared").
/// `param` feeds k / rho / q where relevant.
AuxiliaryFunction by_name(const std::string& name, double param = 1.0,
                          LogBase base = LogBase::two);

/// True for entries that are margin losses of y*h(x).
bool is_margin_entry(const AuxiliaryFunction& f);

} // namespace phi

} // namespace hc
