#include "doctest.h"

#include <cmath>

#include "hconsist/error.hpp"
#include "hconsist/numeric.hpp"

using namespace hc;

TEST_SUITE("numeric") {

TEST_CASE("golden section finds interior and boundary minima") {
    auto r = golden_section([](double x) { return (x - 0.3) * (x - 0.3); }, -1.0, 2.0);
    CHECK(std::abs(r.x - 0.3) < 1e-8);
    auto b = golden_section([](double x) { return x; }, 0.5, 2.0);
    CHECK(b.x == 0.5);
    CHECK(b.f == 0.5);
}

TEST_CASE("grid then golden handles a kinked objective") {
    auto r = grid_then_golden([](double x) { return std::abs(x - 0.123); }, -1.0, 1.0, 101);
    CHECK(std::abs(r.x - 0.123) < 1e-9);
}

TEST_CASE("minimize_convex_line expands the bracket") {
    auto r = minimize_convex_line([](double x) { return std::cosh(x - 37.0); });
    CHECK(std::abs(r.x - 37.0) < 1e-6);
    CHECK(std::abs(r.f - 1.0) < 1e-12);
}

TEST_CASE("minimize_convex_line reports an unbounded direction") {
    CHECK_THROWS_AS(minimize_convex_line([](double x) { return -x; }), BracketFailure);
}

TEST_CASE("bisection inverts a monotone convex function") {
    auto f = [](double x) { return x * x * x + x; };
    double x = bisect_increasing(f, 2.0, 0.0, 2.0);
    CHECK(std::abs(x - 1.0) < 1e-14);
}

TEST_CASE("Kahan sum keeps small increments") {
    KahanSum s;
    s += 1.0;
    for (int i = 0; i < 1000000; ++i) s += 1e-16;
    CHECK(std::abs(s.value() - (1.0 + 1e-10)) < 1e-15);
}

TEST_CASE("midpoint convexity test") {
    CHECK(midpoint_convex([](double x) { return std::exp(x); }, -2, 2));
    CHECK_FALSE(midpoint_convex([](double x) { return std::sin(x); }, -2, 2));
}

}
