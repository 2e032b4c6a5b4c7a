#include "doctest.h"

#include <cmath>

#include "hconsist/error.hpp"
#include "hconsist/numeric.hpp"
#include "hconsist/transform.hpp"

using namespace hc;

TEST_SUITE("transform-catalog") {

TEST_CASE("binary linear-class examples") {
    CHECK(binary_linear_transform("hinge", 0.5)(0.4) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(binary_linear_transform("sigmoid", 0.8, 1.0)(0.5) == doctest::Approx(std::tanh(0.8) * 0.5).epsilon(1e-14));
    CHECK(binary_linear_transform("logistic", 50.0)(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("logistic and exponential curves reach the classical forms at B = 50") {
    auto lg = binary_linear_transform("logistic", 50.0);
    auto ex = binary_linear_transform("exp", 50.0);
    for (double t : linspace(0.0, 0.99, 34)) {
        double ent = (1 + t) / 2 * std::log2(1 + t) + (1 - t) / 2 * std::log2(1 - t);
        CHECK(std::abs(lg(t) - ent) < 1e-9);
        CHECK(std::abs(ex(t) - (1 - std::sqrt(1 - t * t))) < 1e-12);
    }
}

TEST_CASE("comp-sum transform examples") {
    CHECK(comp_sum_transform(0.0, 7)(0.6) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(comp_sum_transform(1.0, 3)(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(comp_sum_transform(2.0, 10)(0.5) == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("comp-sum polynomial bounds") {
    auto pb1 = comp_sum_poly_bounds(1.0, 6);
    CHECK(pb1.inverse_upper(0.08) == doctest::Approx(0.4).epsilon(1e-14));
    auto pb0 = comp_sum_poly_bounds(0.0, 4);
    CHECK(pb0.lower(0.6) == doctest::Approx(0.18).epsilon(1e-14));
    for (double tau : {0.0, 0.5, 1.0, 1.5, 2.0})
        for (int n : {2, 5}) {
            auto T = comp_sum_transform(tau, n);
            auto pb = comp_sum_poly_bounds(tau, n);
            for (double t : linspace(0.0, 1.0, 101)) {
                CHECK(pb.lower(t) <= T(t) + 1e-14);
                double s = T(t);
                CHECK(pb.inverse_upper(s) >= T.inverse(s) - 1e-9);
            }
        }
}

TEST_CASE("table examples") {
    CHECK(multiclass_table_transform(TableFamily::cstnd_phi, "exp")(1.0) ==
          doctest::Approx(2 - std::sqrt(3.0)).epsilon(1e-14));
    TableParams p5;
    p5.n = 5;
    CHECK(multiclass_table_transform(TableFamily::comp_sum_phi, "one_minus", p5)(0.3) ==
          doctest::Approx(0.06).epsilon(1e-14));
    CHECK(multiclass_table_transform(TableFamily::comp_sum_phi, "squared")(0.5) ==
          doctest::Approx(0.0625).epsilon(1e-14));
}

TEST_CASE("adversarial rho examples") {
    CHECK(adversarial_rho_transform(1.0, 1.0)(0.7) == doctest::Approx(0.7));
    CHECK(adversarial_rho_transform(0.25, 1.0)(0.4) == doctest::Approx(0.1));
    auto id = adversarial_rho_transform(2.0, 1.0);
    for (double t : linspace(0, 1, 11)) CHECK(id(t) == doctest::Approx(t));
}

TEST_CASE("Massart modification examples") {
    auto quad = binary_linear_transform("quadratic", 5.0);
    CHECK(massart_modified(quad, 0.25)(0.2) == doctest::Approx(0.1).epsilon(1e-14));
    auto half = massart_modified(quad, 0.5);
    for (double t : linspace(0, 1, 21)) CHECK(half(t) == doctest::Approx(t).epsilon(1e-14));
    auto lg = binary_linear_transform("logistic", 5.0);
    CHECK(massart_modified(lg, 0.5)(1.0) == doctest::Approx(lg(1.0)).epsilon(1e-14));
}

TEST_CASE("bounded-class Psi examples") {
    auto lg = bounded_hypothesis_psi("logistic", HypothesisClassSpec::bounded_symmetric(2, 30.0));
    for (double t : linspace(0, 0.99, 12)) {
        double ent = (1 + t) / 2 * std::log(1 + t) + (1 - t) / 2 * std::log(1 - t);
        CHECK(std::abs(lg(t) - ent) < 1e-9);
    }
    auto ce = bounded_hypothesis_psi("cstnd_exp", HypothesisClassSpec::bounded_symmetric(3, 1.0));
    for (double t : linspace(0, std::tanh(1.0), 9)) CHECK(std::abs(ce(t) - (1 - std::sqrt(1 - t * t))) < 1e-12);

    auto cls = HypothesisClassSpec::bounded_symmetric(4, 0.7);
    auto mae = bounded_hypothesis_psi("mae", cls);
    CHECK(mae(0.5) == doctest::Approx((cls.s_max() - cls.s_min()) / 2 * 0.5).epsilon(1e-14));
    const double e = std::exp(1.4);
    CHECK(cls.s_max() == doctest::Approx(1 / (1 + 3 / e)));
    CHECK(cls.s_min() == doctest::Approx(1 / (1 + 3 * e)));
}

TEST_CASE("inverse round trip and certificates") {
    std::vector<TransformCurve> curves = {binary_linear_transform("logistic", 0.8), binary_linear_transform("exp", 2.0),
                                          comp_sum_transform(0.5, 4), comp_sum_transform(1.5, 3),
                                          multiclass_table_transform(TableFamily::cstnd_phi, "hinge")};
    for (const auto& c : curves) {
        INFO(c.name);
        auto rep = c.certify(400);
        CHECK(rep.ok());
        for (double t : linspace(0, 1, 51)) CHECK(std::abs(c.inverse(c(t)) - t) < 1e-7);
    }
}

TEST_CASE("evaluation outside [0, 1] is rejected") {
    CHECK_THROWS_AS(comp_sum_transform(1.0, 2)(1.1), DomainError);
    CHECK_THROWS_AS(comp_sum_transform(1.0, 2)(-0.01), DomainError);
}

}
