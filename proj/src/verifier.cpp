#include "hconsist/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hconsist/error.hpp"
#include "hconsist/numeric.hpp"

namespace hc {

// ---------------------------------------------------------------- registry

BoundSpec make_bound(const std::string& family, const std::string& loss_id, const BoundParams& p) {
    BoundSpec s;
    s.family = family;
    s.id = family + ":" + loss_id;

    if (family == "binary_linear" || family == "binary_massart") {
        double extra = loss_id == "sigmoid" ? p.k : p.rho;
        s.surrogate = Loss::margin(phi::by_name(loss_id, extra));
        s.target = Loss::zero_one(true);
        s.cls = HypothesisClassSpec::linear(p.W, p.B);
        s.transform = binary_linear_transform(loss_id, p.B, extra);
        if (family == "binary_massart") {
            s.massart_beta = p.beta;
            s.transform = massart_modified(s.transform, p.beta);
        }
        return s;
    }
    if (family == "adversarial_rho") {
        if (loss_id != "rho") throw Unsupported("adversarial bounds are registered for the rho-margin loss only");
        s.surrogate = Loss::sup_margin(phi::rho_margin(p.rho));
        s.target = Loss::adv_zero_one();
        s.cls = HypothesisClassSpec::linear(p.W, p.B);
        s.cls.gamma = p.gamma;
        s.transform = adversarial_rho_transform(p.B, p.rho);
        return s;
    }
    if (family == "comp_sum") {
        s.surrogate = Loss::comp_sum(p.tau);
        s.target = Loss::zero_one(false);
        s.cls = HypothesisClassSpec::complete_symmetric(p.n);
        s.transform = comp_sum_transform(p.tau, p.n);
        return s;
    }
    if (family == "cstnd") {
        s.surrogate = Loss::constrained(phi::by_name(loss_id));
        s.target = Loss::zero_one(false);
        s.cls = HypothesisClassSpec::complete_symmetric(p.n);
        s.transform = multiclass_table_transform(TableFamily::cstnd_phi, loss_id);
        return s;
    }
    if (family == "bounded_comp") {
        double tau;
        if (loss_id == "logistic") tau = 1.0;
        else if (loss_id == "sum_exponential") tau = 0.0;
        else if (loss_id == "mae") tau = 2.0;
        else throw Unsupported("bounded comp-sum bound not registered for " + loss_id);
        s.surrogate = Loss::comp_sum(tau);
        s.target = Loss::zero_one(false);
        s.cls = HypothesisClassSpec::bounded_symmetric(p.n, p.Lambda);
        s.transform = bounded_hypothesis_psi(loss_id, s.cls);
        return s;
    }
    if (family == "bounded_cstnd") {
        if (loss_id != "exp") throw Unsupported("bounded constrained bound registered for exp only");
        s.surrogate = Loss::constrained(phi::exponential());
        s.target = Loss::zero_one(false);
        s.cls = HypothesisClassSpec::bounded_symmetric(p.n, p.Lambda);
        s.transform = bounded_hypothesis_psi("cstnd_exp", s.cls);
        return s;
    }
    throw Unsupported("unregistered bound: " + family + ":" + loss_id);
}

std::vector<BoundSpec> registered_bounds() {
    std::vector<BoundSpec> out;
    for (const char* id : {"hinge", "logistic", "exp", "quadratic", "sigmoid", "rho"})
        out.push_back(make_bound("binary_linear", id));
    for (const char* id : {"hinge", "logistic", "exp", "quadratic"})
        out.push_back(make_bound("binary_massart", id));
    out.push_back(make_bound("adversarial_rho", "rho", {.B = 0.5}));
    for (double tau : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        auto s = make_bound("comp_sum", "tau", {.tau = tau, .n = 4});
        s.id = "comp_sum:tau=" + std::to_string(tau).substr(0, 3);
        out.push_back(std::move(s));
    }
    for (const char* id : {"hinge", "sq-hinge", "exp"}) out.push_back(make_bound("cstnd", id, {.n = 3}));
    for (const char* id : {"logistic", "sum_exponential", "mae"})
        out.push_back(make_bound("bounded_comp", id, {.n = 2, .Lambda = 1.0}));
    for (int n : {2, 3}) {
        auto s = make_bound("bounded_cstnd", "exp", {.n = n, .Lambda = 1.0});
        s.id += ":n=" + std::to_string(n);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------- verify

namespace {

double cstar(const Loss& loss, const HypothesisClassSpec& cls, const ConditionalPoint& pt, double radius) {
    try {
        return best_in_class_conditional(loss, cls, pt);
    } catch (const NoClosedForm&) {
        return brute_force_conditional_oracle(loss, cls, pt, 4096, radius);
    }
}

void check_feasible(const BoundSpec& spec, const ConditionalPoint& pt, const std::vector<double>& s) {
    const auto& cls = spec.cls;
    const double tol = 1e-9;
    if (cls.variant == ClassVariant::Linear) {
        const double R = cls.score_radius(pt.norm_of_x);
        if (s.size() == 2) {
            double w = (s[1] - s[0]) / (2.0 * cls.gamma), h = 0.5 * (s[0] + s[1]);
            if (w < -tol || w > cls.W + tol || std::abs(h) > R + tol)
                throw ConstraintViolation("verify: adversarial scores not realizable by the linear class");
        } else if (std::abs(s.at(0)) > R + tol) {
            throw ConstraintViolation("verify: score outside the linear class range");
        }
    } else if (cls.variant == ClassVariant::BoundedSymmetric) {
        for (double v : s)
            if (std::abs(v) > cls.Lambda_bound + tol)
                throw ConstraintViolation("verify: score outside the bounded class range");
    }
}

} // namespace

BoundReport verify_bound(const BoundSpec& spec, const DiscreteDistribution& dist,
                         const std::vector<std::vector<double>>& scores, const VerifyOptions& opt) {
    dist.validate();
    if (scores.size() != dist.points.size()) throw DomainError("verify: one score vector per support point required");
    if (spec.massart_beta) {
        for (const auto& wp : dist.points)
            if (std::abs(wp.point.prob[0] - 0.5) < *spec.massart_beta - 1e-15)
                throw DomainError("verify: distribution violates the Massart noise condition");
    }

    KahanSum rt, rs, ct, cs;
    for (std::size_t i = 0; i < dist.points.size(); ++i) {
        const auto& wp = dist.points[i];
        check_feasible(spec, wp.point, scores[i]);
        rt += wp.weight * conditional_risk(spec.target, scores[i], wp.point);
        rs += wp.weight * conditional_risk(spec.surrogate, scores[i], wp.point);
        ct += wp.weight * cstar(spec.target, spec.cls, wp.point, opt.surrogate_radius);
        cs += wp.weight * cstar(spec.surrogate, spec.cls, wp.point, opt.surrogate_radius);
    }

    BoundReport r;
    const double target_sum = rt.value() - ct.value();
    const double surrogate_sum = rs.value() - cs.value();
    r.target_excess = target_sum;
    r.surrogate_excess = surrogate_sum;

    const bool has_features = std::all_of(dist.points.begin(), dist.points.end(),
                                          [](const WeightedPoint& wp) { return !wp.point.x.empty(); });
    if (opt.split_gaps && spec.cls.variant == ClassVariant::Linear && has_features) {
        double Rt = fit_linear_1d(spec.target, spec.cls, dist, opt.fit_grid).risk;
        double Rs = fit_linear_1d(spec.surrogate, spec.cls, dist, opt.fit_grid).risk;
        r.target_gap = Rt - ct.value();
        r.surrogate_gap = Rs - cs.value();
        r.target_excess = rt.value() - Rt;
        r.surrogate_excess = rs.value() - Rs;
    }

    r.lhs = spec.transform.eval(std::clamp(target_sum, 0.0, 1.0));
    r.rhs = surrogate_sum;
    r.slack = r.rhs - r.lhs;
    r.tight = std::abs(r.slack) <= opt.tight_tol;
    return r;
}

// ---------------------------------------------------------------- tightness

CompTightness tightness_comp_sum(double tau, int n, double beta, double M) {
    if (!(tau >= 0 && tau <= 1)) throw DomainError("comp-sum tightness: tau must lie in [0, 1]");
    if (!(beta >= 0 && beta <= 1)) throw DomainError("comp-sum tightness: beta must lie in [0, 1]");
    if (n < 2) throw DomainError("comp-sum tightness: n must be at least 2");

    ConditionalPoint pt;
    pt.prob.assign(n, 0.0);
    pt.prob[0] = (1.0 + beta) / 2.0;
    pt.prob[1] = (1.0 - beta) / 2.0;
    std::vector<double> h(n, -M);
    h[0] = h[1] = 0.0;

    auto cls = HypothesisClassSpec::complete_symmetric(n);
    auto target = Loss::zero_one(false);
    auto surrogate = Loss::comp_sum(tau);
    CompTightness out;
    out.achieved_target = conditional_risk(target, h, pt) - best_in_class_conditional(target, cls, pt);
    out.achieved_surrogate = conditional_risk(surrogate, h, pt) - best_in_class_conditional(surrogate, cls, pt);
    out.T_value = comp_sum_transform(tau, n).eval(beta);
    return out;
}

BinaryTightness tightness_binary(const std::string& loss_id, double B, double t, int grid_points, double extra) {
    if (!(t >= 0 && t <= 1)) throw DomainError("binary tightness: t must lie in [0, 1]");
    if (grid_points < 2) throw DomainError("binary tightness: grid needs at least two points");
    auto cls = HypothesisClassSpec::linear(1.0, B);
    auto pt = ConditionalPoint::binary(0.5 + t / 2.0, 0.0);
    auto surrogate = Loss::margin(phi::by_name(loss_id, extra));
    auto target = Loss::zero_one(true);
    const double cs = best_in_class_conditional(surrogate, cls, pt);
    const double ct = best_in_class_conditional(target, cls, pt);

    BinaryTightness out;
    out.resolution = B / grid_points;
    out.surrogate = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        double h = -B + i * out.resolution;
        double v = conditional_risk(surrogate, {h}, pt) - cs;
        if (v < out.surrogate) {
            out.surrogate = v;
            out.h_star = h;
        }
    }
    out.target = conditional_risk(target, {out.h_star}, pt) - ct;
    out.T_value = binary_linear_transform(loss_id, B, extra).eval(t);
    out.slack = out.surrogate - out.T_value;
    return out;
}

// ---------------------------------------------------------------- witnesses

namespace {

bool symmetric_sum(const AuxiliaryFunction& phi) {
    const double c = phi(0.0) * 2.0;
    for (double t : linspace(-5.0, 5.0, 101))
        if (std::abs(phi(t) + phi(-t) - c) > 1e-12) return false;
    return true;
}

} // namespace

WitnessRecord negative_witness_adversarial(const HypothesisClassSpec& cls, const AuxiliaryFunction& phi,
                                           bool perturb) {
    if (cls.variant != ClassVariant::Linear || !(cls.B > 0) || !(cls.gamma > 0))
        throw DomainError("adversarial witness: needs the linear class with B > 0 and gamma > 0");
    if (!midpoint_convex(phi.value, -5.0, 5.0, 1000, 1e-12) && !symmetric_sum(phi))
        throw DomainError("adversarial witness: Phi must be convex or symmetric");

    auto pt = ConditionalPoint::binary(0.5, 0.0);
    const double b = perturb ? cls.B : 0.0;
    const std::vector<double> h0{b, b};  // w = 0, so the perturbation does not move the score
    auto target = Loss::adv_zero_one();
    auto surrogate = Loss::sup_margin(phi);

    WitnessRecord w;
    w.description = "adversarial:" + phi.name + (perturb ? ":separating" : "");
    w.target_risk = conditional_risk(target, h0, pt);
    w.target_best = best_in_class_conditional(target, cls, pt);
    w.target_excess = w.target_risk - w.target_best;
    w.surrogate_risk = conditional_risk(surrogate, h0, pt);
    w.surrogate_best = brute_force_conditional_oracle(surrogate, cls, pt, 4096);
    w.surrogate_excess = w.surrogate_risk - w.surrogate_best;
    return w;
}

WitnessRecord negative_witness_max_loss(int n, const AuxiliaryFunction& phi, bool break_ties) {
    if (n <= 2) throw DomainError("max-loss witness: needs n > 2");
    if (!phi.flags.convex || !midpoint_convex(phi.value, -5.0, 5.0, 1000, 1e-12))
        throw DomainError("max-loss witness: Phi must be convex");

    ConditionalPoint pt;
    pt.prob.assign(n, 0.0);
    pt.prob[0] = pt.prob[1] = 0.5;
    std::vector<double> h(n, 0.0);
    if (break_ties) h[0] = 1e-3;

    auto cls = HypothesisClassSpec::complete_symmetric(n);
    auto target = Loss::zero_one(false);
    auto surrogate = Loss::max_loss(phi);

    WitnessRecord w;
    w.description = "max:" + phi.name + (break_ties ? ":ties-broken" : "");
    w.target_risk = conditional_risk(target, h, pt);
    w.target_best = best_in_class_conditional(target, cls, pt);
    w.target_excess = w.target_risk - w.target_best;
    w.surrogate_risk = conditional_risk(surrogate, h, pt);
    w.surrogate_best = brute_force_conditional_oracle(surrogate, cls, pt, 4096, 30.0);
    w.surrogate_excess = w.surrogate_risk - w.surrogate_best;
    return w;
}

// ---------------------------------------------------------------- fuzz

namespace {

std::vector<double> dirichlet(int n, std::mt19937_64& rng, double floor_mass) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(n);
    for (auto& v : p) v = e(rng);
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v = (1.0 - floor_mass) * v / s + floor_mass / n;
    double rest = 1.0 - std::accumulate(p.begin(), p.end() - 1, 0.0);
    p.back() = rest;
    return p;
}

} // namespace

FuzzInstance random_instance(const BoundSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    const int m = 1 + static_cast<int>(rng() % 4);
    auto weights = dirichlet(m, rng, 0.0);

    FuzzInstance inst;
    const auto& cls = spec.cls;
    const bool binary = spec.target.binary;
    double w = 0, b = 0;
    if (binary) {
        w = cls.W * (2 * u(rng) - 1);
        b = cls.B * (2 * u(rng) - 1);
    }
    for (int i = 0; i < m; ++i) {
        WeightedPoint wp;
        wp.weight = weights[i];
        wp.point.point_id = i;
        if (binary) {
            double x = 2 * u(rng) - 1;
            double eta;
            if (spec.massart_beta) {
                double beta = *spec.massart_beta;
                eta = 0.5 + (u(rng) < 0.5 ? -1 : 1) * (beta + (0.5 - beta) * u(rng));
            } else {
                eta = u(rng) < 0.1 ? std::round(u(rng)) : u(rng);
            }
            wp.point = ConditionalPoint::binary(eta, std::abs(x));
            wp.point.x = {x};
            double h = w * x + b;
            if (spec.target.kind == LossKind::adv_zero_one) {
                double r = cls.gamma * std::abs(w);
                inst.scores.push_back({h - r, h + r});
            } else {
                inst.scores.push_back({h});
            }
        } else {
            const int n = cls.n;
            const bool cstnd = spec.surrogate.kind == LossKind::constrained;
            wp.point.prob = dirichlet(n, rng, cstnd ? 0.1 : 0.0);
            std::vector<double> s(n);
            if (cls.variant == ClassVariant::BoundedSymmetric) {
                const double L = cls.Lambda_bound;
                for (auto& v : s) v = L * (2 * u(rng) - 1);
                if (cstnd) {
                    double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
                    double mx = 0;
                    for (auto& v : s) mx = std::max(mx, std::abs(v -= mean));
                    if (mx > L)
                        for (auto& v : s) v *= L / mx;
                }
            } else {
                for (auto& v : s) v = 2.0 * g(rng);
                if (cstnd) {
                    double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
                    for (auto& v : s) v -= mean;
                }
            }
            if (cstnd) s.back() = -std::accumulate(s.begin(), s.end() - 1, 0.0);
            inst.scores.push_back(std::move(s));
        }
        inst.dist.points.push_back(std::move(wp));
    }
    return inst;
}

FuzzSummary fuzz_bound(const BoundSpec& spec, int instances, std::uint64_t seed) {
    FuzzSummary out;
    out.id = spec.id;
    out.min_slack = std::numeric_limits<double>::infinity();
    VerifyOptions opt;
    opt.split_gaps = false;
    for (int i = 0; i < instances; ++i) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i + 1));
        auto inst = random_instance(spec, rng);
        auto rep = verify_bound(spec, inst.dist, inst.scores, opt);
        ++out.instances;
        if (rep.slack < out.min_slack) {
            out.min_slack = rep.slack;
            out.worst_instance = i;
        }
    }
    return out;
}

} // namespace hc
