#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "hconsist/error.hpp"
#include "hconsist/numeric.hpp"
#include "hconsist/solver.hpp"
#include "hconsist/transform.hpp"

using namespace hc;

namespace {

// inf over tau in [1/n, 1/2] of sup over |mu| <= tau, both on dense grids.
double comp_grid(const AuxiliaryFunction& phi, int n, double t) {
    double best = std::numeric_limits<double>::infinity();
    for (double tau : linspace(1.0 / n, 0.5, 601)) {
        double inner = std::numeric_limits<double>::infinity();
        for (double mu : linspace(-tau, tau, 4001))
            inner = std::min(inner, (1 + t) / 2 * phi(tau - mu) + (1 - t) / 2 * phi(tau + mu));
        best = std::min(best, phi(tau) - inner);
    }
    return best;
}

} // namespace

TEST_SUITE("transform-solver") {

TEST_CASE("comp-sum solver examples") {
    CHECK(solve_comp_transform(phi::neg_log(), 3, 0.5) ==
          doctest::Approx(0.75 * std::log(1.5) + 0.25 * std::log(0.5)).epsilon(1e-7));
    CHECK(solve_comp_transform(phi::squared(), 4, 0.5) == doctest::Approx(0.0625).epsilon(1e-7));
    CHECK(std::abs(solve_comp_transform(phi::neg_log(), 5, 0.0)) < 1e-12);
}

TEST_CASE("comp-sum solver agrees with a grid inf-sup") {
    for (const char* id : {"neg_log", "inv_minus_one", "gen_ce", "squared"})
        for (int n : {2, 4})
            for (double t : {0.2, 0.6, 0.9}) {
                auto phi = phi::by_name(id, 0.5);
                INFO(id << " n=" << n << " t=" << t);
                CHECK(std::abs(solve_comp_transform(phi, n, t) - comp_grid(phi, n, t)) < 2e-5);
            }
}

TEST_CASE("constrained solver examples") {
    CHECK(solve_cstnd_transform(phi::exponential(), 2, 1.0) == doctest::Approx(2 - std::sqrt(3.0)).epsilon(1e-7));
    for (double t : {0.1, 0.5, 0.9}) CHECK(solve_cstnd_transform(phi::hinge(), 2, t) == doctest::Approx(t).epsilon(1e-7));
    CHECK(std::abs(solve_cstnd_transform(phi::exponential(), 3, 0.0)) < 1e-12);
}

TEST_CASE("bounded comp-sum solver") {
    auto wide = HypothesisClassSpec::bounded_symmetric(3, 50.0);
    CHECK(std::abs(solve_bounded_comp_transform(phi::neg_log(), wide, 0.5) -
                   (0.75 * std::log(1.5) + 0.25 * std::log(0.5))) < 1e-5);
    CHECK(std::abs(solve_bounded_comp_transform(phi::neg_log(), wide, 0.0)) < 1e-12);

    // Past tanh(Lambda) the n = 2 curve is linear in t.
    auto c1 = HypothesisClassSpec::bounded_symmetric(2, 1.0);
    const double ts = std::tanh(1.0);
    double a = solve_bounded_comp_transform(phi::neg_log(), c1, ts + 0.05);
    double b = solve_bounded_comp_transform(phi::neg_log(), c1, ts + 0.10);
    double c = solve_bounded_comp_transform(phi::neg_log(), c1, ts + 0.15);
    CHECK(std::abs((c - b) - (b - a)) < 1e-7);
    double d0 = solve_bounded_comp_transform(phi::neg_log(), c1, ts - 0.30);
    double d1 = solve_bounded_comp_transform(phi::neg_log(), c1, ts - 0.15);
    double d2 = solve_bounded_comp_transform(phi::neg_log(), c1, ts);
    CHECK((d2 - d1) - (d1 - d0) > 1e-4);
}

TEST_CASE("bounded solver degenerates to the unbounded one") {
    auto wide = HypothesisClassSpec::bounded_symmetric(3, 50.0);
    for (double t : {0.1, 0.4, 0.8})
        CHECK(std::abs(solve_bounded_comp_transform(phi::neg_log(), wide, t) -
                       solve_comp_transform(phi::neg_log(), 3, t)) < 1e-5);
}

TEST_CASE("bounded constrained solver") {
    auto cls = HypothesisClassSpec::bounded_symmetric(2, 1.0);
    CHECK(solve_bounded_cstnd_transform(phi::exponential(), cls, 0.5) ==
          doctest::Approx(1 - std::sqrt(0.75)).epsilon(1e-7));
    CHECK(std::abs(solve_bounded_cstnd_transform(phi::exponential(), cls, 0.0)) < 1e-12);
    // The linear branch continues the curve with slope (e - 1/e)/2 from tanh(1).
    const double th = std::tanh(1.0);
    const double at_th = 1 - std::sqrt(1 - th * th);
    const double expect = at_th + (0.9 - th) * (std::exp(1.0) - std::exp(-1.0)) / 2;
    CHECK(solve_bounded_cstnd_transform(phi::exponential(), cls, 0.9) == doctest::Approx(expect).epsilon(1e-7));
}

TEST_CASE("binary transform from Phi") {
    CHECK(binary_transform_from_phi(phi::exponential(), 0.6) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(binary_transform_from_phi(phi::quadratic(), 0.4) == doctest::Approx(0.16).epsilon(1e-9));
    CHECK(binary_transform_from_phi(phi::hinge(), 0.0) == 0.0);
}

TEST_CASE("solver refusals") {
    CHECK_THROWS_AS(solve_comp_transform(phi::neg_log(), 1, 0.5), DomainError);
    CHECK_THROWS(solve_comp_transform(phi::custom("sin", [](double u) { return 2 + std::sin(6 * u); }, AuxFlags{}, 0.0, 1.0, {}, {}), 3, 0.5));
    SolverConfig bad;
    bad.tau_grid_size = 1;
    CHECK_THROWS_AS(solve_comp_transform(phi::neg_log(), 3, 0.5, bad), DomainError);
}

}
