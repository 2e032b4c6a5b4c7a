#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hconsist/risk.hpp"
#include "hconsist/transform.hpp"

namespace hc {

/// A (surrogate, target, transform, class) quadruple known to satisfy
/// T(target excess + gap) <= surrogate excess + gap.
struct BoundSpec {
    std::string id;
    std::string family;
    Loss surrogate;
    Loss target;
    TransformCurve transform;
    HypothesisClassSpec cls;
    std::optional<double> massart_beta;  // distributions must satisfy |eta - 1/2| >= beta
};

struct BoundParams {
    double W = 1.0;
    double B = 0.7;
    double k = 1.0;       // sigmoid
    double rho = 1.0;     // rho-margin
    double gamma = 0.1;   // adversarial radius
    double beta = 0.2;    // Massart
    double tau = 1.0;     // comp-sum
    int n = 3;
    double Lambda = 1.0;  // bounded classes
};

/// Families: binary_linear, binary_massart, adversarial_rho, comp_sum, cstnd,
/// bounded_comp, bounded_cstnd. Unknown combinations throw Unsupported.
BoundSpec make_bound(const std::string& family, const std::string& loss_id, const BoundParams& p = {});

/// The quadruples exercised by the fuzz suite.
std::vector<BoundSpec> registered_bounds();

struct BoundReport {
    double target_excess = 0.0;
    double surrogate_excess = 0.0;
    double target_gap = 0.0;
    double surrogate_gap = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool tight = false;
};

struct VerifyOptions {
    bool split_gaps = true;          // fit R* on the linear class to report excess and gap separately
    int fit_grid = 65;
    double surrogate_radius = 30.0;  // oracle box for unbounded classes
    double tight_tol = 1e-9;
};

/// Scores hold one vector per support point in the format the losses take:
/// {h} for binary margin losses, {h_lower, h_upper} for adversarial ones,
/// n scores for multi-class losses.
BoundReport verify_bound(const BoundSpec& spec, const DiscreteDistribution& dist,
                         const std::vector<std::vector<double>>& scores, const VerifyOptions& opt = {});

struct CompTightness {
    double achieved_target = 0.0;
    double achieved_surrogate = 0.0;
    double T_value = 0.0;
};

/// Singleton with p = ((1+beta)/2, (1-beta)/2, 0, ...) and scores (0, 0, -M, ...).
CompTightness tightness_comp_sum(double tau, int n, double beta, double M = 40.0);

struct BinaryTightness {
    double target = 0.0;      // target excess + gap, equals t
    double surrogate = 0.0;   // surrogate excess + gap at the grid optimum
    double T_value = 0.0;
    double h_star = 0.0;
    double slack = 0.0;
    double resolution = 0.0;  // grid spacing on [-B, 0)
};

/// Singleton at the origin with eta = 1/2 + t/2; the best hypothesis with
/// h(x0) < 0 is searched on a uniform grid over [-B, 0).
BinaryTightness tightness_binary(const std::string& loss_id, double B, double t, int grid_points = 100000,
                                 double extra = 1.0);

struct WitnessRecord {
    std::string description;
    double target_risk = 0.0;
    double target_best = 0.0;
    double target_excess = 0.0;
    double surrogate_risk = 0.0;
    double surrogate_best = 0.0;
    double surrogate_excess = 0.0;
};

/// Singleton x0 = 0 with eta = 1/2 on the 1-D linear class; h0 = 0.
/// `perturb` moves h0 to b = B, which separates x0 under the perturbation.
WitnessRecord negative_witness_adversarial(const HypothesisClassSpec& cls, const AuxiliaryFunction& phi,
                                           bool perturb = false);

/// p(y1) = p(y2) = 1/2 with all-equal scores; `break_ties` raises the score of y1 slightly.
WitnessRecord negative_witness_max_loss(int n, const AuxiliaryFunction& phi, bool break_ties = false);

struct FuzzSummary {
    std::string id;
    int instances = 0;
    double min_slack = 0.0;
    int worst_instance = -1;
};

/// Random finite-support distributions and feasible hypotheses for `spec`.
struct FuzzInstance {
    DiscreteDistribution dist;
    std::vector<std::vector<double>> scores;
};
FuzzInstance random_instance(const BoundSpec& spec, std::mt19937_64& rng);

FuzzSummary fuzz_bound(const BoundSpec& spec, int instances, std::uint64_t seed);

} // namespace hc
