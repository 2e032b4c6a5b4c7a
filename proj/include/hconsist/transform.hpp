#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hconsist/risk.hpp"

namespace hc {

enum class InverseMode { closed_form, bisection, relaxed_upper };

struct CurveFlags {
    bool convex = true;
    bool nondecreasing = true;
    bool zero_at_zero = true;
};

struct CertificateReport {
    bool zero_at_zero = true;
    bool nondecreasing = true;
    bool convex = true;
    bool inverse_roundtrip = true;
    double max_inverse_residual = 0.0;

    bool ok() const { return zero_at_zero && nondecreasing && convex && inverse_roundtrip; }
};

/// An error transformation T on [0, 1] together with its inverse.
struct TransformCurve {
    std::string name;
    std::string source_tag;
    std::function<double(double)> fn;              // raw evaluator on [0, 1]
    std::function<double(double)> closed_inverse;  // may be empty
    std::function<double(double)> relaxed_inverse; // upper bound on the inverse, may be empty
    InverseMode inverse_mode = InverseMode::bisection;
    CurveFlags flags;

    /// T(t); t outside [0, 1] by more than 1e-9 is a DomainError.
    double eval(double t) const;
    double operator()(double t) const { return eval(t); }

    /// Gamma(s). Bisection saturates at 1 once s reaches T(1); closed forms
    /// extend past T(1) the way the tabulated inverses do.
    double inverse(double s) const;

    /// Checks T(0) = 0, monotonicity and midpoint convexity on a grid, and the
    /// inverse round trip T(Gamma(s)) = s (or >= s for relaxed inverses).
    CertificateReport certify(int points = 1000) const;
};

TransformCurve linear_curve(double coef, std::string name, std::string tag);

/// Binary linear-class transforms: hinge, logistic, exp, quadratic, sigmoid, rho.
/// `extra` carries k for sigmoid and rho for the rho-margin loss.
TransformCurve binary_linear_transform(const std::string& loss_id, double B, double extra = 1.0,
                                       bool relaxed_inverse = false);
/// One-hidden-layer version, B replaced by Lambda * B.
TransformCurve binary_nn_transform(const std::string& loss_id, double Lambda, double B, double extra = 1.0,
                                   bool relaxed_inverse = false);

TransformCurve comp_sum_transform(double tau, int n);

struct PolyBounds {
    TransformCurve lower;                 // T~ <= T
    std::function<double(double)> inverse_upper;  // Gamma~ >= Gamma on R+
};
PolyBounds comp_sum_poly_bounds(double tau, int n);

enum class TableFamily { comp_sum_phi, cstnd_phi, sum_loss, max_rho, cstnd_basic };

struct TableParams {
    int n = 2;
    double q = 0.5;      // gen_ce
    double B = 1.0;      // max_rho
    double rho = 1.0;    // max_rho
    std::optional<double> Lambda;  // max_rho on one-hidden-layer networks
};

TableFamily table_family_from_name(const std::string& name);

TransformCurve multiclass_table_transform(TableFamily family, const std::string& phi_id,
                                          const TableParams& params = {});

/// Supremum-based rho-margin loss; coefficient min{B, rho} / rho (B -> Lambda B for networks).
TransformCurve adversarial_rho_transform(double B, double rho, std::optional<double> Lambda = std::nullopt);

/// Massart-modified transform. In adversarial mode `base` plays the second
/// piece and the first piece is base(2t - 1) unless `first` is supplied.
TransformCurve massart_modified(const TransformCurve& base, double beta, bool adversarial = false,
                                const std::optional<TransformCurve>& first = std::nullopt);

/// Bound coefficient (1 + 2 beta) / (4 beta) / c of the adversarial Massart
/// hinge and sigmoid entries, c = min{B, 1} or tanh(k B).
double massart_adversarial_coefficient(const std::string& loss_id, double B, double beta, double k = 1.0);

/// Piecewise Psi on bounded symmetric classes: logistic, sum_exponential,
/// gen_ce, mae and cstnd_exp.
TransformCurve bounded_hypothesis_psi(const std::string& loss_id, const HypothesisClassSpec& cls,
                                      double q = 0.5);

} // namespace hc
