#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hconsist/aux_function.hpp"
#include "hconsist/losses.hpp"

namespace hc {

enum class ClassVariant { AllMeasurable, Linear, OneLayerNN, BoundedSymmetric, CompleteSymmetric };

struct HypothesisClassSpec {
    ClassVariant variant = ClassVariant::CompleteSymmetric;
    int n = 2;
    double W = 1.0;
    double B = 1.0;
    double Lambda = 1.0;        // one-hidden-layer scale
    double p = 2.0;             // input norm index
    double Lambda_bound = 1.0;  // per-coordinate score bound for BoundedSymmetric
    double gamma = 0.0;         // perturbation radius, adversarial contexts only

    static HypothesisClassSpec all_measurable(int n = 2);
    static HypothesisClassSpec complete_symmetric(int n);
    static HypothesisClassSpec linear(double W, double B, double p = 2.0);
    static HypothesisClassSpec one_layer_nn(double Lambda, double W, double B, double p = 2.0);
    static HypothesisClassSpec bounded_symmetric(int n, double Lambda_bound);

    /// Per-coordinate score range at an input of norm `norm_x`; +inf when unbounded.
    double score_radius(double norm_x) const;
    /// Largest worst-case margin B + W max(|x| - gamma, 0) on the linear class.
    double adversarial_radius(double norm_x) const;
    bool bounded() const;

    double s_min() const;
    double s_max() const;
    double Lambda_min() const;
};

struct ConditionalPoint {
    int point_id = 0;
    double norm_of_x = 0.0;
    std::vector<double> prob;    // binary: {eta, 1 - eta}, index 0 is label +1
    std::vector<double> x;       // optional raw features (1-D linear models)

    static ConditionalPoint binary(double eta, double norm_x = 0.0);
    void validate() const;
    int classes() const { return static_cast<int>(prob.size()); }
};

struct WeightedPoint {
    double weight = 0.0;
    ConditionalPoint point;
};

struct DiscreteDistribution {
    std::vector<WeightedPoint> points;

    void validate() const;
    void write(std::ostream& os) const;
    static DiscreteDistribution read(std::istream& is);
};

enum class LossKind { zero_one, adv_zero_one, margin, sup_margin, comp_sum, constrained, max_loss };

/// A loss on score vectors. Binary kinds take scores {h} (zero_one, margin) or
/// {h_lower, h_upper} over the perturbation ball (adv_zero_one, sup_margin);
/// binary label index 0 stands for +1 and index 1 for -1.
struct Loss {
    LossKind kind = LossKind::zero_one;
    AuxiliaryFunction phi;
    double tau = 1.0;
    bool binary = true;

    static Loss zero_one(bool binary = true);
    static Loss adv_zero_one();
    static Loss margin(AuxiliaryFunction phi);
    static Loss sup_margin(AuxiliaryFunction phi);
    static Loss comp_sum(double tau);
    static Loss constrained(AuxiliaryFunction phi);
    /// max_{y' != y} Phi(h(y) - h(y')).
    static Loss max_loss(AuxiliaryFunction phi);

    std::string name() const;
    double operator()(const std::vector<double>& scores, int y) const;
};

/// argmax with ties broken toward the highest index.
int argmax_high(const std::vector<double>& scores);

double conditional_risk(const Loss& loss, const std::vector<double>& scores, const ConditionalPoint& pt);

double best_in_class_conditional(const Loss& loss, const HypothesisClassSpec& cls, const ConditionalPoint& pt);

/// Grid + golden-section minimum of the conditional risk over the class score box.
/// Unbounded classes need `surrogate_radius` > 0.
double brute_force_conditional_oracle(const Loss& loss, const HypothesisClassSpec& cls,
                                      const ConditionalPoint& pt, int grid_resolution = 4096,
                                      double surrogate_radius = 0.0);

double generalization_risk(const Loss& loss, const std::vector<std::vector<double>>& scores_per_point,
                           const DiscreteDistribution& dist);

struct GapReport {
    double best_in_class_risk = 0.0;
    double expected_pointwise_infimum = 0.0;
    double gap = 0.0;
};

enum class GapMode { decoupled, linear_1d_grid, deterministic_bounded_formula };

struct GapOptions {
    int grid = 129;                 // per-parameter grid for linear_1d_grid
    double surrogate_radius = 30.0; // used when C* must be brute-forced on an unbounded class
    double R_star_tau0 = -1.0;      // deterministic_bounded_formula input
};

GapReport minimizability_gap(const Loss& loss, const HypothesisClassSpec& cls, const DiscreteDistribution& dist,
                             GapMode mode, const GapOptions& opt = {});

/// Minimum risk of a 1-D linear model h(x) = w x + b, |w| <= W, |b| <= B.
struct Linear1dFit {
    double w, b, risk;
};
Linear1dFit fit_linear_1d(const Loss& loss, const HypothesisClassSpec& cls, const DiscreteDistribution& dist,
                          int grid);

/// Closed-form comp-sum gap for deterministic distributions on a bounded class.
double comp_sum_gap_deterministic(double tau, double Lambda, int n, double R_star_tau0);

struct GapOrdering {
    std::vector<double> taus;
    std::vector<double> gaps;
    std::vector<double> margins;  // gaps[i] - gaps[i+1]
    bool nonincreasing = true;
};

GapOrdering gap_ordering_check(double Lambda, int n, double R_star_tau0, const std::vector<double>& taus);

} // namespace hc
