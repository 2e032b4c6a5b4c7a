#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "hconsist/aux_function.hpp"
#include "hconsist/error.hpp"
#include "hconsist/losses.hpp"
#include "hconsist/numeric.hpp"

using namespace hc;

namespace {

// Softmax probability of label y computed directly.
double softmax_prob(const std::vector<double>& s, int y) {
    double m = *std::max_element(s.begin(), s.end()), z = 0;
    for (double v : s) z += std::exp(v - m);
    return std::exp(s[y] - m) / z;
}

LinearHypothesis binary_h(double w, double b) {
    LinearHypothesis h;
    h.w = {{w}};
    h.b = {b};
    return h;
}

} // namespace

TEST_SUITE("loss-catalog") {

TEST_CASE("margin entries match their defining formulas") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-4, 4);
    auto hinge = phi::hinge();
    auto lg = phi::logistic();
    auto ex = phi::exponential();
    auto quad = phi::quadratic();
    auto sig = phi::sigmoid(1.5);
    auto rho = phi::rho_margin(0.7);
    for (int i = 0; i < 200; ++i) {
        double t = u(rng);
        CHECK(hinge(t) == doctest::Approx(std::max(0.0, 1 - t)).epsilon(1e-15));
        CHECK(lg(t) == doctest::Approx(std::log2(1 + std::exp(-t))).epsilon(1e-13));
        CHECK(ex(t) == doctest::Approx(std::exp(-t)).epsilon(1e-15));
        CHECK(quad(t) == doctest::Approx(t <= 1 ? (1 - t) * (1 - t) : 0.0).epsilon(1e-15));
        CHECK(sig(t) == doctest::Approx(1 - std::tanh(1.5 * t)).epsilon(1e-14));
        CHECK(rho(t) == doctest::Approx(std::min(1.0, std::max(0.0, 1 - t / 0.7))).epsilon(1e-15));
    }
}

TEST_CASE("supplied derivatives agree with central differences") {
    std::mt19937_64 rng(5);
    std::vector<AuxiliaryFunction> all = {phi::logistic(), phi::exponential(), phi::sigmoid(1.0),
                                          phi::neg_log(), phi::inv_minus_one(), phi::gen_ce(0.5),
                                          phi::one_minus(), phi::squared(), phi::hinge(), phi::quadratic()};
    for (const auto& f : all) {
        if (!f.has_derivative()) continue;
        const double lo = std::max(f.domain_lo, -5.0), hi = std::min(f.domain_hi, 5.0);
        std::uniform_real_distribution<double> u(lo + 0.05, hi - 0.05);
        for (int i = 0; i < 64; ++i) {
            double x = u(rng);
            if (std::abs(x - 1.0) < 1e-3) continue;  // hinge / quadratic kinks
            const double h = 1e-6 * std::max(1.0, std::abs(x));
            double fd = (f(x + h) - f(x - h)) / (2 * h);
            double d = f.derivative(x);
            INFO(f.name << " at " << x);
            CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
        }
    }
}

TEST_CASE("values are finite and nonnegative on the domain") {
    for (const char* id : {"hinge", "logistic2", "exp", "sq-hinge", "sigmoid", "rho", "neg_log", "inv_minus_one",
                           "gen_ce", "one_minus", "squared"}) {
        auto f = phi::by_name(id, 0.5);
        for (double x : linspace(std::max(f.domain_lo, -20.0) + 1e-6, std::min(f.domain_hi, 20.0), 401)) {
            double v = f(x);
            INFO(id << " at " << x);
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("margin loss examples") {
    CHECK(eval_margin_loss(phi::hinge(), 0.0) == 1.0);
    CHECK(eval_margin_loss(phi::logistic(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_margin_loss(phi::rho_margin(0.5), 0.25) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("comp-sum loss examples") {
    CHECK(eval_comp_sum({1.0, 2}, {0, 0}, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(eval_comp_sum({2.0, 4}, {0.3, 0.3, 0.3, 0.3}, 0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(eval_comp_sum({0.0, 2}, {1, 0}, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("comp-sum loss matches the softmax form") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 2);
    for (double tau : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0})
        for (int i = 0; i < 50; ++i) {
            std::vector<double> s(4);
            for (auto& v : s) v = g(rng);
            int y = static_cast<int>(rng() % 4);
            double p = softmax_prob(s, y);
            double expect;
            if (tau == 1.0) expect = -std::log(p);
            else expect = (1.0 - std::pow(p, tau - 1.0)) / (tau - 1.0);
            CHECK(eval_comp_sum({tau, 4}, s, y) == doctest::Approx(expect).epsilon(1e-10));
        }
}

TEST_CASE("constrained loss examples") {
    CHECK(eval_constrained(phi::exponential(), {0, 0}, 0) == doctest::Approx(1.0));
    CHECK(eval_constrained(phi::hinge(), {1, -1}, 0) == 0.0);
    CHECK(eval_constrained(phi::squared(), {0.5, -0.5}, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(eval_constrained(phi::hinge(), {1, 1}, 0), ConstraintViolation);
}

TEST_CASE("sup margin loss examples") {
    std::vector<double> x{0.5};
    CHECK(eval_sup_margin_linear(phi::rho_margin(1.0), binary_h(2, 0.1), x, 1, 0.1, 2.0) ==
          doctest::Approx(0.1).epsilon(1e-13));
    CHECK(eval_sup_margin_linear(phi::exponential(), binary_h(0, 0.3), x, 1, 0.7, 2.0) ==
          doctest::Approx(std::exp(-0.3)).epsilon(1e-15));
    CHECK(eval_sup_margin_linear(phi::hinge(), binary_h(1, 0), {0.0}, -1, 0.2, 2.0) ==
          doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("sup margin loss equals a dense grid supremum over the ball") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const char* id : {"hinge", "logistic2", "exp", "sigmoid", "rho"}) {
        auto f = phi::by_name(id);
        for (int i = 0; i < 20; ++i) {
            double w = 2 * u(rng), b = u(rng), x = u(rng), gamma = 0.3 * (u(rng) + 1.01);
            int y = u(rng) < 0 ? -1 : 1;
            double best = -1;
            for (double xp : linspace(x - gamma, x + gamma, 10001)) best = std::max(best, f(y * (w * xp + b)));
            CHECK(std::abs(eval_sup_margin_linear(f, binary_h(w, b), {x}, y, gamma, 2.0) - best) < 1e-6);
        }
    }
}

TEST_CASE("smooth adversarial comp-sum examples") {
    LinearHypothesis h;
    h.w = {{1.0}, {0.0}};
    h.b = {0.0, 0.0};
    SmoothAdvParams p;
    p.tau = 1.0;
    p.gamma = 0.5;
    p.rho = 1.0;
    p.nu = 1.0;
    CHECK(eval_smooth_adv_comp_sum(p, h, {0.0}, 0) == doctest::Approx(std::log(2.0) + 0.5).epsilon(1e-14));

    LinearHypothesis eq;
    eq.w = {{0.4}, {0.4}, {0.4}};
    eq.b = {0.1, -0.2, 0.3};
    p.rho = 2.0;
    std::vector<double> s{(0.4 * 0.7 + 0.1) / 2, (0.4 * 0.7 - 0.2) / 2, (0.4 * 0.7 + 0.3) / 2};
    CHECK(eval_smooth_adv_comp_sum(p, eq, {0.7}, 1) == doctest::Approx(eval_comp_sum({1.0, 3}, s, 1)));
}

TEST_CASE("smooth adversarial comp-sum upper-bounds the adversarial comp-sum rho-margin loss") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 100; ++i) {
        const int n = 2 + static_cast<int>(rng() % 3);
        LinearHypothesis h;
        for (int j = 0; j < n; ++j) {
            h.w.push_back({2 * u(rng)});
            h.b.push_back(u(rng));
        }
        SmoothAdvParams p;
        p.tau = std::array<double, 4>{0.0, 0.5, 1.0, 1.7}[rng() % 4];
        p.rho = 0.5 + u(rng) * 0.4 + 0.4;
        p.nu = std::sqrt(n - 1.0) / p.rho;
        p.gamma = 0.05 + 0.2 * (u(rng) + 1);
        const double x = u(rng);
        const int y = static_cast<int>(rng() % n);
        // sup over the ball of Phi^tau(sum_{y' != y} Phi_rho(h(x', y) - h(x', y'))).
        double sup = 0;
        for (double xp : linspace(x - p.gamma, x + p.gamma, 10001)) {
            double u = 0;
            for (int j = 0; j < n; ++j) {
                if (j == y) continue;
                double d = (h.w[y][0] - h.w[j][0]) * xp + h.b[y] - h.b[j];
                u += std::min(std::max(0.0, 1 - d / p.rho), 1.0);
            }
            double v = p.tau == 1.0 ? std::log1p(u) : (std::pow(1 + u, 1 - p.tau) - 1) / (1 - p.tau);
            sup = std::max(sup, v);
        }
        CHECK(eval_smooth_adv_comp_sum(p, h, {x}, y) >= sup - 1e-12);
    }
}

}
