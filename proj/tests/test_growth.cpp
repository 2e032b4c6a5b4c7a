#include "doctest.h"

#include <cmath>

#include "hconsist/error.hpp"
#include "hconsist/growth.hpp"
#include "hconsist/numeric.hpp"

using namespace hc;

TEST_SUITE("growth") {

TEST_CASE("smooth curves grow quadratically") {
    for (const auto& id : growth_curve_ids(true)) {
        auto g = fit_growth(growth_curve(id));
        INFO(id);
        CHECK(g.slope >= 1.98);
        CHECK(g.slope <= 2.02);
        CHECK(g.envelope_power == 2);
        CHECK(g.C / g.c <= 1.5);
    }
}

TEST_CASE("polyhedral curves grow linearly") {
    for (const auto& id : growth_curve_ids(false)) {
        auto g = fit_growth(growth_curve(id));
        INFO(id);
        CHECK(g.slope >= 0.999);
        CHECK(g.slope <= 1.001);
        CHECK(g.envelope_power == 1);
    }
}

TEST_CASE("fit recovers a known power law") {
    auto g = fit_growth([](double t) { return 0.3 * std::pow(t, 1.5); });
    CHECK(g.slope == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(std::exp(g.intercept) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(g.max_residual < 1e-12);
}

TEST_CASE("exponential minimizers follow the closed form") {
    std::vector<double> ts{0.0, 1e-3, 0.1, 0.5, 0.9};
    auto tr = minimizer_trajectory(phi::exponential(), ts);
    for (size_t i = 0; i < ts.size(); ++i)
        CHECK(std::abs(tr.a_star[i] - 0.5 * std::log((1 + ts[i]) / (1 - ts[i]))) < 1e-6);
    CHECK(tr.expected_ratio == doctest::Approx(1.0));
    CHECK(std::abs(tr.a_star[1] / 1e-3 - 1.0) < 0.02);
}

TEST_CASE("logistic minimizer ratio against finite differences") {
    auto f = phi::logistic(LogBase::natural);
    const double h = 1e-3;
    double d1 = (f(h) - f(-h)) / (2 * h);
    double d2 = (f(h) - 2 * f(0) + f(-h)) / (h * h);
    auto tr = minimizer_trajectory(f, {0.0, 1e-3});
    CHECK(tr.a_star[0] == 0.0);
    double ratio = tr.a_star[1] / 1e-3;
    CHECK(std::abs(ratio - std::abs(d1) / d2) <= 0.02 * std::abs(d1) / d2);
    CHECK(std::abs(ratio - 2.0) < 0.04);
}

TEST_CASE("growth refusals") {
    CHECK_THROWS_AS(minimizer_trajectory(phi::hinge(), {1e-3}), DomainError);
    CHECK_THROWS_AS(fit_growth([](double t) { return t; }, 1e-2, 1e-4), DomainError);
    CHECK_THROWS_AS(fit_growth([](double) { return 0.0; }), DomainError);
    CHECK_THROWS_AS(growth_curve("nope"), DomainError);
}

}
