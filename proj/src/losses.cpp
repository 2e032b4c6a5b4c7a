#include "hconsist/losses.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hconsist/error.hpp"

namespace hc {

double LinearHypothesis::score(const std::vector<double>& x, int y) const {
    const auto& wy = w.at(y);
    if (wy.size() != x.size()) throw DomainError("linear hypothesis: dimension mismatch");
    double s = std::inner_product(wy.begin(), wy.end(), x.begin(), 0.0);
    return s + (b.empty() ? 0.0 : b.at(y));
}

double eval_margin_loss(const AuxiliaryFunction& phi, double margin) {
    return phi(margin);
}

double phi_tau_from_log1p(double tau, double L) {
    if (tau < 0) throw DomainError("comp-sum: tau must be nonnegative");
    if (std::abs(tau - 1.0) < 1e-12) return L;
    if (std::abs(tau - 2.0) < 1e-12) return -std::expm1(-L);
    return std::expm1((1.0 - tau) * L) / (1.0 - tau);
}

double phi_tau(double tau, double u) {
    if (u < 0) throw DomainError("comp-sum: Phi^tau needs u >= 0");
    return phi_tau_from_log1p(tau, std::log1p(u));
}

double eval_comp_sum(const CompSumParams& params, const std::vector<double>& scores, int y) {
    const int n = static_cast<int>(scores.size());
    if (n < 2 || y < 0 || y >= n) throw DomainError("comp-sum: bad label or score vector");
    for (double s : scores)
        if (!std::isfinite(s)) throw DomainError("comp-sum: non-finite score");

    // Shift by the max so no exponent is positive.
    const double m = *std::max_element(scores.begin(), scores.end());
    double others = 0.0;
    for (int j = 0; j < n; ++j)
        if (j != y) others += std::exp(scores[j] - m);
    const double ey = std::exp(scores[y] - m);
    double ratio = others / ey;
    double L = std::isfinite(ratio) ? std::log1p(ratio) : std::log(others) - (scores[y] - m);

    double v = phi_tau_from_log1p(params.tau, L);
    if (!std::isfinite(v)) throw DomainError("comp-sum: non-finite loss after max shift");
    return v;
}

double eval_constrained(const AuxiliaryFunction& phi, const std::vector<double>& scores, int y) {
    const int n = static_cast<int>(scores.size());
    if (y < 0 || y >= n) throw DomainError("constrained: bad label");
    double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
    if (std::abs(sum) > 1e-9) throw ConstraintViolation("constrained: scores must sum to zero");
    double v = 0.0;
    for (int j = 0; j < n; ++j)
        if (j != y) v += phi(-scores[j]);
    return v;
}

double lp_norm(const std::vector<double>& v, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double a : v) m = std::max(m, std::abs(a));
        return m;
    }
    if (!(p >= 1)) throw DomainError("norm index must be >= 1");
    double s = 0.0;
    for (double a : v) s += std::pow(std::abs(a), p);
    return std::pow(s, 1.0 / p);
}

double conjugate_index(double p) {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return p / (p - 1.0);
}

double eval_sup_margin_linear(const AuxiliaryFunction& phi, const LinearHypothesis& h,
                              const std::vector<double>& x, int y, double gamma, double p) {
    if (h.classes() != 1) throw DomainError("sup margin loss: binary hypothesis expected");
    if (!(gamma > 0)) throw DomainError("sup margin loss: gamma must be positive");
    if (y != 1 && y != -1) throw DomainError("sup margin loss: label must be +1 or -1");
    const double wx = h.score(x, 0);
    const double shift = gamma * lp_norm(h.w[0], conjugate_index(p));
    // Phi is nonincreasing, so the worst point minimises y h(x').
    return phi(y == 1 ? wx - shift : -(wx + shift));
}

double weight_difference_op_norm(const LinearHypothesis& h, int y, double p) {
    const int n = h.classes();
    const int d = static_cast<int>(h.w.at(0).size());
    Eigen::MatrixXd M(n - 1, d);
    for (int j = 0, r = 0; j < n; ++j) {
        if (j == y) continue;
        for (int k = 0; k < d; ++k) M(r, k) = h.w[y][k] - h.w[j][k];
        ++r;
    }
    if (d == 1) return M.col(0).norm();
    if (p != 2.0) throw Unsupported("smooth adversarial loss: p->2 operator norm only exact for d = 1 or p = 2");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
}

double eval_smooth_adv_comp_sum(const SmoothAdvParams& params, const LinearHypothesis& h,
                                const std::vector<double>& x, int y) {
    const int n = h.classes();
    if (n < 2) throw DomainError("smooth adversarial loss: need at least two classes");
    if (!(params.rho > 0) || !(params.gamma > 0)) throw DomainError("smooth adversarial loss: rho, gamma > 0");
    if (params.nu < std::sqrt(n - 1.0) / params.rho - 1e-15)
        throw DomainError("smooth adversarial loss: nu must be at least sqrt(n-1)/rho");
    if (x.size() > 1 && params.p != 2.0)
        throw Unsupported("smooth adversarial loss: d > 1 requires p = 2");

    std::vector<double> scores(n);
    for (int j = 0; j < n; ++j) scores[j] = h.score(x, j) / params.rho;
    double base = eval_comp_sum({params.tau, n}, scores, y);
    return base + params.nu * params.gamma * weight_difference_op_norm(h, y, params.p);
}

} // namespace hc
