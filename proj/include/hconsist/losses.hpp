#pragma once

#include <vector>

#include "hconsist/aux_function.hpp"

namespace hc {

struct CompSumParams {
    double tau = 1.0;
    int n = 2;
};

/// Binary (single w, b) or multi-class (one row per class) linear scorer.
struct LinearHypothesis {
    std::vector<std::vector<double>> w;
    std::vector<double> b;

    int classes() const { return static_cast<int>(w.size()); }
    double score(const std::vector<double>& x, int y = 0) const;
};

struct SmoothAdvParams {
    double tau = 1.0;
    double rho = 1.0;
    double nu = 1.0;
    double gamma = 0.1;
    double p = 2.0;  // use INFINITY for l_inf
};

double eval_margin_loss(const AuxiliaryFunction& phi, double margin);

/// Phi^tau(u) for u >= 0. Log branch at |tau - 1| < 1e-12, 1 - 1/(1+u) at tau = 2.
double phi_tau(double tau, double u);

/// Same as phi_tau but from L = log(1 + u); avoids forming u when it overflows.
double phi_tau_from_log1p(double tau, double L);

/// Comp-sum loss Phi^tau(sum_{y'} e^{h(y') - h(y)} - 1); labels are 0-based.
double eval_comp_sum(const CompSumParams& params, const std::vector<double>& scores, int y);

/// Constrained loss sum_{y' != y} Phi(-h(y')), scores must sum to zero.
double eval_constrained(const AuxiliaryFunction& phi, const std::vector<double>& scores, int y);

/// Norm with index p (p = INFINITY allowed) and its conjugate.
double lp_norm(const std::vector<double>& v, double p);
double conjugate_index(double p);

/// Supremum of Phi(y h(x')) over the l_p ball of radius gamma for a binary linear h.
double eval_sup_margin_linear(const AuxiliaryFunction& phi, const LinearHypothesis& h,
                              const std::vector<double>& x, int y, double gamma, double p);

/// p -> 2 operator norm of the (n-1) x d matrix with rows w_y - w_{y'}.
double weight_difference_op_norm(const LinearHypothesis& h, int y, double p);

double eval_smooth_adv_comp_sum(const SmoothAdvParams& params, const LinearHypothesis& h,
                                const std::vector<double>& x, int y);

} // namespace hc
