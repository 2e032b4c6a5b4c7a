#include "hconsist/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "hconsist/error.hpp"
#include "hconsist/growth.hpp"
#include "hconsist/numeric.hpp"
#include "hconsist/risk.hpp"
#include "hconsist/simulator.hpp"
#include "hconsist/solver.hpp"
#include "hconsist/transform.hpp"
#include "hconsist/verifier.hpp"

namespace hc {

namespace {

const char* const kNames[] = {"catalog-solver", "comp-sum-values", "tightness", "witnesses", "growth",
                              "simulation",     "gap-ordering",    "oracle",    "inversion", "fuzz"};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

// Collects failure notes; the detail string keeps the worst value seen.
struct Tally {
    bool pass = true;
    std::vector<std::string> notes;

    void fail(const std::string& what) {
        pass = false;
        if (notes.size() < 8) notes.push_back(what);
    }
    std::string joined(const std::string& summary) const {
        std::string s = summary;
        for (const auto& n : notes) s += "; " + n;
        return s;
    }
};

// ---------------------------------------------------------------- 1

CriterionResult catalog_solver(const AcceptanceOptions&) {
    CriterionResult r;
    Tally tally;
    const auto grid = linspace(0.0, 1.0, 51);
    const int n_comp = 4, n_cstnd = 3;
    double worst = 0.0;

    auto row = [&](const std::string& label, const std::function<double(double)>& solver, const TransformCurve& c) {
        double err = 0.0;
        for (double t : grid) err = std::max(err, std::abs(solver(t) - c.eval(t)));
        worst = std::max(worst, err);
        if (!(err <= 1e-6)) tally.fail(label + " err=" + fmt(err));
    };

    TableParams tp;
    tp.n = n_comp;
    tp.q = 0.5;
    for (const char* id : {"neg_log", "inv_minus_one", "gen_ce", "one_minus", "squared"}) {
        auto phi = phi::by_name(id, tp.q);
        row(std::string("comp/") + id, [&](double t) { return solve_comp_transform(phi, n_comp, t); },
            multiclass_table_transform(TableFamily::comp_sum_phi, id, tp));
    }
    for (const char* id : {"exp", "hinge", "sq-hinge", "squared"}) {
        auto phi = phi::by_name(id);
        row(std::string("cstnd/") + id, [&](double t) { return solve_cstnd_transform(phi, n_cstnd, t); },
            multiclass_table_transform(TableFamily::cstnd_phi, id));
    }
    r.pass = tally.pass;
    r.detail = tally.joined("9 rows, max |solver - closed form| = " + fmt(worst));
    return r;
}

// ---------------------------------------------------------------- 2

CriterionResult comp_sum_values(const AcceptanceOptions&) {
    CriterionResult r;
    const double a = comp_sum_transform(1.0, 10).eval(1.0);
    const double b = comp_sum_transform(0.0, 10).eval(0.6);
    const double c = comp_sum_transform(2.0, 10).eval(0.5);
    const double ea = std::abs(a - std::log(2.0)), eb = std::abs(b - 0.2), ec = std::abs(c - 0.05);
    r.pass = ea <= 1e-9 && eb <= 1e-9 && ec <= 1e-12;
    r.detail = "T1(1) err " + fmt(ea) + ", T0(0.6) err " + fmt(eb) + ", T2(0.5; n=10) err " + fmt(ec);
    return r;
}

// ---------------------------------------------------------------- 3

CriterionResult tightness(const AcceptanceOptions&) {
    CriterionResult r;
    Tally tally;
    double worst_comp = 0.0;
    for (int n : {3, 10})
        for (double tau : {0.0, 0.5, 1.0})
            for (int i = 1; i <= 9; ++i) {
                const double beta = i / 10.0;
                auto ct = tightness_comp_sum(tau, n, beta);
                const double e = std::abs(ct.achieved_surrogate - ct.T_value);
                worst_comp = std::max(worst_comp, e);
                if (!(e <= 1e-6) || std::abs(ct.achieved_target - beta) > 1e-12)
                    tally.fail("comp tau=" + fmt(tau) + " beta=" + fmt(beta) + " err=" + fmt(e));
            }
    double worst_bin = 0.0;
    for (const char* id : {"hinge", "sigmoid", "rho"})
        for (double t : {0.2, 0.5, 0.8, 1.0}) {
            auto bt = tightness_binary(id, 1.0, t);
            worst_bin = std::max(worst_bin, bt.slack);
            if (!(bt.slack <= 1e-4 && bt.slack >= -1e-12))
                tally.fail(std::string("binary ") + id + " t=" + fmt(t) + " slack=" + fmt(bt.slack));
        }
    r.pass = tally.pass;
    r.detail = tally.joined("comp-sum max err " + fmt(worst_comp) + ", binary max slack " + fmt(worst_bin) +
                            " (grid spacing 1e-5)");
    return r;
}

// ---------------------------------------------------------------- 4

CriterionResult witnesses(const AcceptanceOptions&) {
    CriterionResult r;
    Tally tally;
    auto check = [&](const WitnessRecord& w) {
        if (std::abs(w.target_excess - 0.5) > 1e-12 || std::abs(w.surrogate_excess) > 1e-12)
            tally.fail(w.description + " = (" + fmt(w.target_excess) + ", " + fmt(w.surrogate_excess) + ")");
    };
    auto cls = HypothesisClassSpec::linear(1.0, 1.0);
    cls.gamma = 0.1;
    check(negative_witness_adversarial(cls, phi::hinge()));
    check(negative_witness_adversarial(cls, phi::sigmoid(1.0)));
    check(negative_witness_max_loss(3, phi::hinge()));
    check(negative_witness_max_loss(3, phi::exponential()));
    r.pass = tally.pass;
    r.detail = tally.joined("adversarial (hinge, sigmoid) and max-loss (hinge, exp) witnesses");
    return r;
}

// ---------------------------------------------------------------- 5

CriterionResult growth(const AcceptanceOptions&) {
    CriterionResult r;
    Tally tally;
    std::string slopes;
    for (bool smooth : {true, false})
        for (const auto& id : growth_curve_ids(smooth)) {
            auto g = fit_growth(growth_curve(id));
            const bool ok = smooth ? (g.slope >= 1.98 && g.slope <= 2.02) : (g.slope >= 0.999 && g.slope <= 1.001);
            slopes += (slopes.empty() ? "" : " ") + id + "=" + fmt(g.slope);
            if (!ok) tally.fail(id + " slope " + fmt(g.slope));
        }
    r.pass = tally.pass;
    r.detail = tally.joined("slopes " + slopes);
    return r;
}

// ---------------------------------------------------------------- 6

CriterionResult simulation(const AcceptanceOptions& opt) {
    CriterionResult r;
    Tally tally;
    const std::vector<double> sigmas{0.3, 0.1, 0.03, 0.01, 0.003};
    const double k_se = 4.0 * std::max(1.0, std::sqrt(1e6 / static_cast<double>(opt.samples)));
    double worst_z = 0.0;
    std::string final_slacks;

    for (auto sc : {Scenario::nonadversarial, Scenario::adversarial}) {
        SimulationSpec spec;
        spec.scenario = sc;
        spec.sample_count = opt.samples;
        spec.seed = opt.seed;
        for (double sigma : sigmas) {
            spec.sigma = sigma;
            auto mc = estimate_risks(spec);
            auto q = quadrature_risks(spec);
            for (std::size_t k = 0; k < mc.rows.size(); ++k) {
                const auto& e = mc.rows[k];
                const auto& p = q.rows[k];
                const std::string where = e.loss + "@" + fmt(sigma);
                if (!(p.risk_target <= p.risk_surrogate)) tally.fail("population bound fails " + where);
                const double zt = std::abs(e.risk_target - p.risk_target) / e.se_target;
                const double zs = std::abs(e.risk_surrogate - p.risk_surrogate) / e.se_surrogate;
                worst_z = std::max({worst_z, zt, zs});
                if (!(zt <= k_se && zs <= k_se)) tally.fail("MC/quadrature disagree " + where);
                if (sigma == sigmas.back()) {
                    final_slacks += (final_slacks.empty() ? "" : " ") + e.loss + "=" + fmt(e.slack);
                    if (!(e.slack <= 0.02)) tally.fail("slack " + fmt(e.slack) + " > 0.02 for " + where);
                }
            }
        }
    }
    r.pass = tally.pass;
    r.detail = tally.joined("max |MC - quadrature| / SE = " + fmt(worst_z) + "; slack at sigma=0.003: " +
                            final_slacks);
    return r;
}

// ---------------------------------------------------------------- 7

CriterionResult gap_ordering(const AcceptanceOptions& opt) {
    CriterionResult r;
    Tally tally;
    std::mt19937_64 rng(opt.seed ^ 0x7A11ULL);
    std::uniform_real_distribution<double> uL(0.2, 3.0), uR(0.01, 1.0);
    const int ns[] = {3, 10, 100};
    double min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
        const double L = uL(rng);
        const int n = ns[rng() % 3];
        const double c0 = std::exp(-2.0 * L) * (n - 1);
        const double R = c0 + uR(rng) * (1.0 + c0);
        auto g = gap_ordering_check(L, n, R, {0.0, 1.0, 1.5, 2.0});
        for (double m : g.margins) min_margin = std::min(min_margin, m);
        if (!g.nonincreasing) tally.fail("Lambda=" + fmt(L) + " n=" + std::to_string(n));
    }
    r.pass = tally.pass;
    r.detail = tally.joined("20 tuples, smallest strict margin " + fmt(min_margin));
    return r;
}

// ---------------------------------------------------------------- 8

ConditionalPoint random_point(int n, std::mt19937_64& rng, double norm_max) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ConditionalPoint pt;
    if (n == 2) {
        pt = ConditionalPoint::binary(u(rng), norm_max * u(rng));
        return pt;
    }
    std::exponential_distribution<double> e(1.0);
    pt.prob.resize(n);
    double s = 0;
    for (auto& v : pt.prob) s += (v = e(rng));
    for (auto& v : pt.prob) v = 0.95 * v / s + 0.05 / n;
    double rest = 1.0;
    for (int j = 0; j + 1 < n; ++j) rest -= pt.prob[j];
    pt.prob.back() = rest;
    return pt;
}

CriterionResult oracle(const AcceptanceOptions& opt) {
    CriterionResult r;
    Tally tally;
    std::mt19937_64 rng(opt.seed ^ 0x0AC1EULL);
    double worst = 0.0;
    int pairs = 0;

    auto run = [&](const std::string& label, const Loss& loss, const HypothesisClassSpec& cls, int n, double norm_max,
                   double radius, bool one_hot = false) {
        ++pairs;
        double err = 0.0;
        for (int i = 0; i < 50; ++i) {
            auto pt = random_point(n, rng, norm_max);
            if (one_hot) {
                std::fill(pt.prob.begin(), pt.prob.end(), 0.0);
                pt.prob[rng() % n] = 1.0;
            }
            const double closed = best_in_class_conditional(loss, cls, pt);
            const double brute = brute_force_conditional_oracle(loss, cls, pt, 4096, radius);
            err = std::max(err, std::abs(closed - brute));
        }
        worst = std::max(worst, err);
        if (!(err <= 1e-4)) tally.fail(label + " err=" + fmt(err));
    };

    auto lin = HypothesisClassSpec::linear(1.0, 0.7);
    auto adv = lin;
    adv.gamma = 0.2;
    auto bounded2 = HypothesisClassSpec::bounded_symmetric(2, 1.0);
    auto bounded3 = HypothesisClassSpec::bounded_symmetric(3, 0.8);
    auto all = HypothesisClassSpec::all_measurable(2);

    run("zero_one/linear", Loss::zero_one(true), lin, 2, 1.0, 0.0);
    run("zero_one/all", Loss::zero_one(true), all, 2, 1.0, 5.0);
    for (int n : {3, 4}) run("zero_one/complete n=" + std::to_string(n), Loss::zero_one(false),
                             HypothesisClassSpec::complete_symmetric(n), n, 0.0, 5.0);
    run("adv_zero_one/linear", Loss::adv_zero_one(), adv, 2, 1.0, 0.0);
    run("sup_rho/linear", Loss::sup_margin(phi::rho_margin(1.0)), adv, 2, 1.0, 0.0);
    for (const char* id : {"hinge", "logistic", "exp", "quadratic", "sigmoid", "rho"}) {
        auto phi = phi::by_name(id, id == std::string("rho") ? 0.8 : 1.0);
        run(std::string("margin/linear/") + id, Loss::margin(phi), lin, 2, 1.0, 0.0);
        run(std::string("margin/bounded/") + id, Loss::margin(phi), bounded2, 2, 0.0, 0.0);
    }
    for (double tau : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        run("comp_sum/complete tau=" + fmt(tau), Loss::comp_sum(tau), HypothesisClassSpec::complete_symmetric(3), 3,
            0.0, 30.0);
        run("comp_sum/bounded one-hot tau=" + fmt(tau), Loss::comp_sum(tau), bounded3, 3, 0.0, 0.0, true);
    }
    r.pass = tally.pass;
    r.detail = tally.joined(std::to_string(pairs) + " (loss, class) pairs x 50 points, max err " + fmt(worst));
    return r;
}

// ---------------------------------------------------------------- 9

std::vector<TransformCurve> catalog_curves() {
    std::vector<TransformCurve> out;
    const char* binary_ids[] = {"hinge", "logistic", "exp", "quadratic", "sigmoid", "rho"};
    for (double B : {0.5, 2.0})
        for (const char* id : binary_ids) {
            out.push_back(binary_linear_transform(id, B));
            out.push_back(binary_nn_transform(id, 1.5, B));
        }
    for (double tau : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) out.push_back(comp_sum_transform(tau, 4));
    TableParams tp;
    tp.n = 4;
    for (const char* id : {"neg_log", "inv_minus_one", "gen_ce", "one_minus", "squared"})
        out.push_back(multiclass_table_transform(TableFamily::comp_sum_phi, id, tp));
    for (const char* id : {"exp", "hinge", "sq-hinge", "squared"})
        out.push_back(multiclass_table_transform(TableFamily::cstnd_phi, id));
    for (const char* id : {"sq-hinge", "exp", "rho"}) out.push_back(multiclass_table_transform(TableFamily::sum_loss, id));
    for (const char* id : {"hinge", "sq-hinge", "exp", "rho"})
        out.push_back(multiclass_table_transform(TableFamily::cstnd_basic, id));
    out.push_back(multiclass_table_transform(TableFamily::max_rho, "rho", tp));
    out.push_back(adversarial_rho_transform(0.5, 1.0));
    for (const char* id : {"hinge", "logistic", "exp", "quadratic"}) {
        out.push_back(massart_modified(binary_linear_transform(id, 0.7), 0.2));
        out.push_back(massart_modified(binary_linear_transform(id, 0.7), 0.2, true));
    }
    auto b2 = HypothesisClassSpec::bounded_symmetric(2, 1.0);
    for (const char* id : {"logistic", "sum_exponential", "gen_ce", "mae", "cstnd_exp"})
        out.push_back(bounded_hypothesis_psi(id, b2));
    return out;
}

CriterionResult inversion(const AcceptanceOptions&) {
    CriterionResult r;
    Tally tally;
    const auto grid = linspace(0.0, 1.0, 101);
    double worst = 0.0;
    const auto curves = catalog_curves();
    for (const auto& c : curves) {
        double err = 0.0;
        for (double t : grid) err = std::max(err, std::abs(c.inverse(c.eval(t)) - t));
        worst = std::max(worst, err);
        if (!(err <= 1e-8)) tally.fail(c.source_tag + " err=" + fmt(err));
    }
    r.pass = tally.pass;
    r.detail = tally.joined(std::to_string(curves.size()) + " curves, max |Gamma(T(t)) - t| = " + fmt(worst));
    return r;
}

// ---------------------------------------------------------------- 10

CriterionResult fuzz(const AcceptanceOptions& opt) {
    CriterionResult r;
    Tally tally;
    const auto specs = registered_bounds();
    std::vector<FuzzSummary> sums(specs.size());
    std::vector<std::string> errors(specs.size());
    std::atomic<std::size_t> next{0};
    const int nt = worker_threads(static_cast<int>(specs.size()));
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < specs.size();) {
                try {
                    sums[i] = fuzz_bound(specs[i], opt.fuzz_instances, opt.seed + i);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        });
    for (auto& th : pool) th.join();

    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!errors[i].empty()) {
            tally.fail(specs[i].id + ": " + errors[i]);
            continue;
        }
        worst = std::min(worst, sums[i].min_slack);
        if (!(sums[i].min_slack >= -1e-7))
            tally.fail(specs[i].id + " slack " + fmt(sums[i].min_slack) + " at instance " +
                       std::to_string(sums[i].worst_instance));
    }
    r.pass = tally.pass;
    r.detail = tally.joined(std::to_string(specs.size()) + " bounds x " + std::to_string(opt.fuzz_instances) +
                            " instances, min slack " + fmt(worst));
    return r;
}

} // namespace

std::vector<int> criterion_ids() {
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

std::string criterion_name(int id) {
    if (id < 1 || id > 10) throw DomainError("no acceptance criterion " + std::to_string(id));
    return kNames[id - 1];
}

int criterion_from_string(const std::string& s) {
    for (int i = 1; i <= 10; ++i)
        if (s == kNames[i - 1] || s == std::to_string(i)) return i;
    throw DomainError("unknown acceptance criterion: " + s);
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    using Fn = CriterionResult (*)(const AcceptanceOptions&);
    static const Fn fns[] = {catalog_solver, comp_sum_values, tightness, witnesses, growth,
                             simulation,     gap_ordering,    oracle,    inversion, fuzz};
    const std::string name = criterion_name(id);
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = fns[id - 1](opt);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.id = id;
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Runtime budgets.
    if (id == 1 && r.seconds > 30.0) {
        r.pass = false;
        r.detail += "; runtime " + fmt(r.seconds) + " s > 30 s";
    }
    if (id == 6 && r.seconds > 180.0) {
        r.pass = false;
        r.detail += "; runtime " + fmt(r.seconds) + " s > 180 s";
    }
    return r;
}

void print_result(std::ostream& os, const CriterionResult& r) {
    os << "criterion=" << r.id << " name=" << r.name << " status=" << (r.pass ? "PASS" : "FAIL")
       << " seconds=" << std::fixed << std::setprecision(2) << r.seconds << std::defaultfloat << " detail=\""
       << r.detail << "\"\n";
}

} // namespace hc
