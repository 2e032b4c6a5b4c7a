#include "doctest.h"

#include <cmath>
#include <sstream>

#include "hconsist/error.hpp"
#include "hconsist/risk.hpp"

using namespace hc;

namespace {

ConditionalPoint multi(std::vector<double> p) {
    ConditionalPoint pt;
    pt.prob = std::move(p);
    return pt;
}

double entropy2(double e) { return -e * std::log2(e) - (1 - e) * std::log2(1 - e); }

} // namespace

TEST_SUITE("risk-engine") {

TEST_CASE("conditional risk examples") {
    CHECK(conditional_risk(Loss::zero_one(false), {1, 0}, multi({0.3, 0.7})) == doctest::Approx(0.7));
    CHECK(conditional_risk(Loss::margin(phi::logistic()), {0.0}, ConditionalPoint::binary(0.5)) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("comp-sum tau=2 at equal scores on three classes is 2/3") {
    // 1 - softmax = 1 - 1/3 for every label, so the expectation is 2/3 whatever p is.
    double r = conditional_risk(Loss::comp_sum(2.0), {0.4, 0.4, 0.4}, multi({0.7, 0.2, 0.1}));
    CHECK(r == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("best-in-class conditional examples") {
    CHECK(best_in_class_conditional(Loss::zero_one(), HypothesisClassSpec::complete_symmetric(2),
                                    ConditionalPoint::binary(0.7)) == doctest::Approx(0.3));
    CHECK(best_in_class_conditional(Loss::margin(phi::logistic()), HypothesisClassSpec::all_measurable(),
                                    ConditionalPoint::binary(0.9)) == doctest::Approx(entropy2(0.9)).epsilon(1e-9));
    double det = best_in_class_conditional(Loss::comp_sum(1.0), HypothesisClassSpec::bounded_symmetric(3, 1.0),
                                           multi({1.0, 0.0, 0.0}));
    CHECK(det == doctest::Approx(std::log(1 + 2 * std::exp(-2.0))).epsilon(1e-9));
}

TEST_CASE("brute-force oracle examples") {
    auto lin = HypothesisClassSpec::linear(1.0, 5.0);
    CHECK(std::abs(brute_force_conditional_oracle(Loss::margin(phi::logistic()), lin, ConditionalPoint::binary(0.9),
                                                  10000) -
                   entropy2(0.9)) < 1e-4);
    CHECK(brute_force_conditional_oracle(Loss::zero_one(), lin, ConditionalPoint::binary(0.5)) ==
          doctest::Approx(0.5));
    auto small = HypothesisClassSpec::linear(1.0, 0.2);
    CHECK(brute_force_conditional_oracle(Loss::margin(phi::exponential()), small, ConditionalPoint::binary(0.9)) ==
          doctest::Approx(0.9 * std::exp(-0.2) + 0.1 * std::exp(0.2)).epsilon(1e-9));
}

TEST_CASE("closed-form class optimum agrees with the oracle") {
    auto lin = HypothesisClassSpec::linear(0.5, 0.7);
    for (const char* id : {"hinge", "logistic2", "exp", "sq-hinge", "sigmoid", "rho"})
        for (double eta : {0.05, 0.3, 0.5, 0.62, 0.97})
            for (double nx : {0.0, 0.8}) {
                auto pt = ConditionalPoint::binary(eta, nx);
                Loss l = Loss::margin(phi::by_name(id));
                INFO(id << " eta=" << eta << " |x|=" << nx);
                CHECK(std::abs(best_in_class_conditional(l, lin, pt) - brute_force_conditional_oracle(l, lin, pt)) <
                      1e-7);
            }
}

TEST_CASE("generalization risk examples") {
    DiscreteDistribution d;
    d.points.push_back({1.0, ConditionalPoint::binary(0.3)});
    Loss l = Loss::margin(phi::hinge());
    CHECK(generalization_risk(l, {{0.2}}, d) == doctest::Approx(conditional_risk(l, {0.2}, d.points[0].point)));

    DiscreteDistribution two;
    two.points.push_back({0.5, ConditionalPoint::binary(1.0)});
    two.points.push_back({0.5, ConditionalPoint::binary(1.0)});
    CHECK(generalization_risk(Loss::zero_one(), {{1.0}, {-1.0}}, two) == doctest::Approx(0.5));

    DiscreteDistribution w;
    w.points.push_back({1.0, ConditionalPoint::binary(0.5)});
    CHECK(generalization_risk(Loss::adv_zero_one(), {{-0.1, 0.1}}, w) == doctest::Approx(1.0));
}

TEST_CASE("distribution file round trip") {
    DiscreteDistribution d;
    d.points.push_back({0.25, ConditionalPoint::binary(0.125, 0.5)});
    d.points.push_back({0.75, ConditionalPoint::binary(0.875, 1.5)});
    std::stringstream ss;
    d.write(ss);
    auto r = DiscreteDistribution::read(ss);
    REQUIRE(r.points.size() == 2);
    CHECK(r.points[1].weight == 0.75);
    CHECK(r.points[1].point.norm_of_x == 1.5);
    CHECK(r.points[0].point.prob[0] == 0.125);
}

TEST_CASE("invalid distributions are rejected") {
    DiscreteDistribution d;
    d.points.push_back({0.6, ConditionalPoint::binary(0.5)});
    CHECK_THROWS_AS(d.validate(), DomainError);
    CHECK_THROWS_AS(multi({0.5, 0.6}).validate(), DomainError);
}

TEST_CASE("decoupled gap is zero") {
    DiscreteDistribution d;
    d.points.push_back({0.4, ConditionalPoint::binary(0.8)});
    d.points.push_back({0.6, ConditionalPoint::binary(0.1)});
    auto g = minimizability_gap(Loss::margin(phi::exponential()), HypothesisClassSpec::linear(1, 1), d,
                                GapMode::decoupled);
    CHECK(g.gap == 0.0);
}

TEST_CASE("gap ordering examples") {
    auto o = gap_ordering_check(1.0, 10, 2.0, {0, 1, 1.5, 2});
    CHECK(o.nonincreasing);
    for (double m : o.margins) CHECK(m > 0);

    // R* equal to the deterministic minimum makes every gap vanish.
    for (double tau : {0.0, 1.0, 2.0}) {
        double cstar0 = 2.0 * std::exp(-2.0);  // (n - 1) e^{-2 Lambda} for tau = 0, n = 3
        CHECK(std::abs(comp_sum_gap_deterministic(tau, 1.0, 3, cstar0)) < 1e-12);
    }

    // Hand evaluation of the tau = 0 and tau = 2 members for Lambda = 0.5, n = 3, R* = 1.
    const double u = 1.0 / (1 + 2 * std::exp(-1.0));            // best softmax probability
    const double v = 1.0 / (1 + 1.0);                           // probability at R* = 1 for tau = 0
    CHECK(comp_sum_gap_deterministic(0.0, 0.5, 3, 1.0) == doctest::Approx((1 / v - 1) - (1 / u - 1)).epsilon(1e-12));
    CHECK(comp_sum_gap_deterministic(2.0, 0.5, 3, 1.0) == doctest::Approx((1 - v) - (1 - u)).epsilon(1e-12));
}

}
