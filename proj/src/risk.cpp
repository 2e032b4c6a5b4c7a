#include "hconsist/risk.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hconsist/error.hpp"
#include "hconsist/numeric.hpp"

namespace hc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- classes

HypothesisClassSpec HypothesisClassSpec::all_measurable(int n) {
    HypothesisClassSpec c;
    c.variant = ClassVariant::AllMeasurable;
    c.n = n;
    return c;
}

HypothesisClassSpec HypothesisClassSpec::complete_symmetric(int n) {
    HypothesisClassSpec c;
    c.variant = ClassVariant::CompleteSymmetric;
    c.n = n;
    return c;
}

HypothesisClassSpec HypothesisClassSpec::linear(double W, double B, double p) {
    if (!(W > 0) || !(B >= 0)) throw DomainError("linear class: W > 0 and B >= 0 required");
    HypothesisClassSpec c;
    c.variant = ClassVariant::Linear;
    c.W = W;
    c.B = B;
    c.p = p;
    return c;
}

HypothesisClassSpec HypothesisClassSpec::one_layer_nn(double Lambda, double W, double B, double p) {
    if (!(Lambda > 0) || !(W > 0) || !(B >= 0)) throw DomainError("one-layer class: Lambda, W > 0 required");
    HypothesisClassSpec c;
    c.variant = ClassVariant::OneLayerNN;
    c.Lambda = Lambda;
    c.W = W;
    c.B = B;
    c.p = p;
    return c;
}

HypothesisClassSpec HypothesisClassSpec::bounded_symmetric(int n, double Lambda_bound) {
    if (!(Lambda_bound > 0)) throw DomainError("bounded class: Lambda must be positive");
    HypothesisClassSpec c;
    c.variant = ClassVariant::BoundedSymmetric;
    c.n = n;
    c.Lambda_bound = Lambda_bound;
    return c;
}

double HypothesisClassSpec::score_radius(double norm_x) const {
    switch (variant) {
    case ClassVariant::Linear:
        return W * norm_x + B;
    case ClassVariant::OneLayerNN:
        return Lambda * (W * norm_x + B);
    case ClassVariant::BoundedSymmetric:
        return Lambda_bound;
    default:
        return kInf;
    }
}

double HypothesisClassSpec::adversarial_radius(double norm_x) const {
    if (variant != ClassVariant::Linear) throw Unsupported("adversarial radius: linear class only");
    return B + W * std::max(norm_x - gamma, 0.0);
}

bool HypothesisClassSpec::bounded() const {
    return variant == ClassVariant::Linear || variant == ClassVariant::OneLayerNN ||
           variant == ClassVariant::BoundedSymmetric;
}

double HypothesisClassSpec::s_max() const {
    if (variant != ClassVariant::BoundedSymmetric) return 1.0;
    return 1.0 / (1.0 + (n - 1) * std::exp(-2.0 * Lambda_bound));
}

double HypothesisClassSpec::s_min() const {
    if (variant != ClassVariant::BoundedSymmetric) return 0.0;
    return 1.0 / (1.0 + (n - 1) * std::exp(2.0 * Lambda_bound));
}

double HypothesisClassSpec::Lambda_min() const {
    if (variant != ClassVariant::BoundedSymmetric) return kInf;
    return Lambda_bound;
}

// ---------------------------------------------------------------- points

ConditionalPoint ConditionalPoint::binary(double eta, double norm_x) {
    ConditionalPoint p;
    p.norm_of_x = norm_x;
    p.prob = {eta, 1.0 - eta};
    return p;
}

void ConditionalPoint::validate() const {
    if (prob.size() < 2) throw DomainError("conditional point: need at least two classes");
    double s = 0.0;
    for (double v : prob) {
        if (!(v >= 0)) throw DomainError("conditional point: negative probability");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("conditional point: probabilities must sum to 1");
    if (norm_of_x < 0) throw DomainError("conditional point: negative norm");
}

void DiscreteDistribution::validate() const {
    if (points.empty()) throw DomainError("distribution: empty support");
    double s = 0.0;
    for (const auto& wp : points) {
        if (!(wp.weight > 0)) throw DomainError("distribution: weights must be positive");
        wp.point.validate();
        s += wp.weight;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("distribution: weights must sum to 1");
}

void DiscreteDistribution::write(std::ostream& os) const {
    os.precision(17);
    for (const auto& wp : points) {
        os << wp.weight << ' ' << wp.point.norm_of_x;
        for (double v : wp.point.prob) os << ' ' << v;
        os << '\n';
    }
}

DiscreteDistribution DiscreteDistribution::read(std::istream& is) {
    DiscreteDistribution d;
    std::string line;
    int id = 0;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> vals;
        double v;
        while (ls >> v) vals.push_back(v);
        if (!ls.eof()) throw DomainError("distribution: unparsable row: " + line);
        if (vals.empty()) continue;
        if (vals.size() < 4) throw DomainError("distribution: row needs weight, norm and >= 2 probabilities");
        WeightedPoint wp;
        wp.weight = vals[0];
        wp.point.point_id = id++;
        wp.point.norm_of_x = vals[1];
        wp.point.prob.assign(vals.begin() + 2, vals.end());
        d.points.push_back(std::move(wp));
    }
    d.validate();
    return d;
}

// ---------------------------------------------------------------- losses

Loss Loss::zero_one(bool binary) {
    Loss l;
    l.kind = LossKind::zero_one;
    l.binary = binary;
    return l;
}

Loss Loss::adv_zero_one() {
    Loss l;
    l.kind = LossKind::adv_zero_one;
    return l;
}

Loss Loss::margin(AuxiliaryFunction phi) {
    Loss l;
    l.kind = LossKind::margin;
    l.phi = std::move(phi);
    return l;
}

Loss Loss::sup_margin(AuxiliaryFunction phi) {
    Loss l;
    l.kind = LossKind::sup_margin;
    l.phi = std::move(phi);
    return l;
}

Loss Loss::comp_sum(double tau) {
    Loss l;
    l.kind = LossKind::comp_sum;
    l.tau = tau;
    l.binary = false;
    return l;
}

Loss Loss::constrained(AuxiliaryFunction phi) {
    Loss l;
    l.kind = LossKind::constrained;
    l.phi = std::move(phi);
    l.binary = false;
    return l;
}

Loss Loss::max_loss(AuxiliaryFunction phi) {
    Loss l;
    l.kind = LossKind::max_loss;
    l.phi = std::move(phi);
    l.binary = false;
    return l;
}

std::string Loss::name() const {
    switch (kind) {
    case LossKind::zero_one: return "zero_one";
    case LossKind::adv_zero_one: return "adv_zero_one";
    case LossKind::margin: return "margin:" + phi.name;
    case LossKind::sup_margin: return "sup:" + phi.name;
    case LossKind::comp_sum: {
        std::ostringstream os;
        os << "comp_sum:tau=" << tau;
        return os.str();
    }
    case LossKind::constrained: return "cstnd:" + phi.name;
    case LossKind::max_loss: return "max:" + phi.name;
    }
    return "?";
}

int argmax_high(const std::vector<double>& scores) {
    int best = 0;
    for (int j = 1; j < static_cast<int>(scores.size()); ++j)
        if (scores[j] >= scores[best]) best = j;
    return best;
}

double Loss::operator()(const std::vector<double>& s, int y) const {
    switch (kind) {
    case LossKind::zero_one:
        if (binary) {
            if (s.size() != 1) throw DomainError("binary zero-one: one score expected");
            // sign(0) = +1
            return (y == 0) ? (s[0] < 0 ? 1.0 : 0.0) : (s[0] >= 0 ? 1.0 : 0.0);
        }
        return argmax_high(s) == y ? 0.0 : 1.0;
    case LossKind::adv_zero_one:
        if (s.size() != 2) throw DomainError("adversarial zero-one: {h_lower, h_upper} expected");
        return (y == 0) ? (s[0] <= 0 ? 1.0 : 0.0) : (s[1] >= 0 ? 1.0 : 0.0);
    case LossKind::margin:
        if (s.size() != 1) throw DomainError("margin loss: one score expected");
        return phi(y == 0 ? s[0] : -s[0]);
    case LossKind::sup_margin:
        if (s.size() != 2) throw DomainError("sup margin loss: {h_lower, h_upper} expected");
        return phi(y == 0 ? s[0] : -s[1]);
    case LossKind::comp_sum:
        return eval_comp_sum({tau, static_cast<int>(s.size())}, s, y);
    case LossKind::constrained:
        return eval_constrained(phi, s, y);
    case LossKind::max_loss: {
        double m = -kInf;
        for (int j = 0; j < static_cast<int>(s.size()); ++j)
            if (j != y) m = std::max(m, phi(s[y] - s[j]));
        return m;
    }
    }
    return 0.0;
}

double conditional_risk(const Loss& loss, const std::vector<double>& scores, const ConditionalPoint& pt) {
    const int n = pt.classes();
    if (loss.binary && n != 2) throw DomainError("conditional risk: binary loss on multi-class point");
    if (!loss.binary && static_cast<int>(scores.size()) != n)
        throw DomainError("conditional risk: score dimension does not match class count");
    double r = 0.0;
    for (int y = 0; y < n; ++y)
        if (pt.prob[y] > 0) r += pt.prob[y] * loss(scores, y);
    return r;
}

// ---------------------------------------------------------------- closed forms

namespace {

double binary_risk_at(const AuxiliaryFunction& phi, double eta, double h) {
    double r = 0.0;
    if (eta > 0) r += eta * phi(h);
    if (eta < 1) r += (1.0 - eta) * phi(-h);
    return r;
}

double binary_margin_cstar(const AuxiliaryFunction& phi, double eta, double R) {
    const double a = std::abs(2.0 * eta - 1.0);
    auto clip = [R](double h) { return std::clamp(h, -R, R); };
    switch (phi.id) {
    case PhiId::hinge:
        return 1.0 - a * std::min(R, 1.0);
    case PhiId::logistic2:
        return binary_risk_at(phi, eta, clip(std::log(eta) - std::log1p(-eta)));
    case PhiId::exponential:
        return binary_risk_at(phi, eta, clip(0.5 * (std::log(eta) - std::log1p(-eta))));
    case PhiId::quadratic:
        return binary_risk_at(phi, eta, clip(2.0 * eta - 1.0));
    case PhiId::sigmoid:
        return 1.0 - a * std::tanh(phi.param * R);
    case PhiId::rho_margin:
        return 1.0 - std::max(eta, 1.0 - eta) * std::min(R, phi.param) / phi.param;
    default:
        throw NoClosedForm("no closed-form minimal conditional risk for margin loss " + phi.name);
    }
}

double comp_sum_cstar_complete(double tau, const std::vector<double>& p) {
    if (tau < 0 || tau > 2.0 + 1e-12)
        throw NoClosedForm("comp-sum minimal conditional risk registered for tau in [0, 2] only");
    if (std::abs(tau - 1.0) < 1e-12) {
        double h = 0.0;
        for (double v : p)
            if (v > 0) h -= v * std::log(v);
        return h;
    }
    if (std::abs(tau - 2.0) < 1e-12) return 1.0 - *std::max_element(p.begin(), p.end());
    const double e = 1.0 / (2.0 - tau);
    double z = 0.0;
    for (double v : p) z += std::pow(v, e);
    return (std::pow(z, 2.0 - tau) - 1.0) / (1.0 - tau);
}

bool is_one_hot(const std::vector<double>& p) {
    int ones = 0;
    for (double v : p) {
        if (v == 1.0) ++ones;
        else if (v != 0.0) return false;
    }
    return ones == 1;
}

} // namespace

double best_in_class_conditional(const Loss& loss, const HypothesisClassSpec& cls, const ConditionalPoint& pt) {
    pt.validate();
    const double R = cls.score_radius(pt.norm_of_x);
    switch (loss.kind) {
    case LossKind::zero_one: {
        if (loss.binary) {
            double eta = pt.prob[0];
            return R > 0 ? std::min(eta, 1.0 - eta) : 1.0 - eta;
        }
        if (R > 0) return 1.0 - *std::max_element(pt.prob.begin(), pt.prob.end());
        return 1.0 - pt.prob.back();
    }
    case LossKind::adv_zero_one: {
        const double eta = pt.prob[0];
        bool separable;
        switch (cls.variant) {
        case ClassVariant::AllMeasurable:
        case ClassVariant::CompleteSymmetric:
            separable = true;
            break;
        case ClassVariant::Linear:
            // sup over the class of the worst-case score is B + W max(|x| - gamma, 0)
            separable = cls.B > 0 || (pt.norm_of_x > cls.gamma);
            break;
        case ClassVariant::OneLayerNN:
            if (!(cls.B > 0)) throw NoClosedForm("adversarial zero-one: one-layer class needs B > 0");
            separable = true;
            break;
        default:
            throw NoClosedForm("adversarial zero-one: unsupported class");
        }
        return separable ? std::min(eta, 1.0 - eta) : 1.0;
    }
    case LossKind::sup_margin:
        // With a positive perturbation radius at most one of the two worst-case
        // margins is positive, so only the rho-margin entry has a simple form.
        if (cls.variant == ClassVariant::Linear && loss.phi.id == PhiId::rho_margin) {
            const double eta = pt.prob[0], rho = loss.phi.param;
            return 1.0 - std::max(eta, 1.0 - eta) * std::min(cls.adversarial_radius(pt.norm_of_x), rho) / rho;
        }
        throw NoClosedForm("no closed-form minimal conditional risk for " + loss.name());
    case LossKind::margin:
        if (cls.variant == ClassVariant::BoundedSymmetric && cls.n != 2)
            throw NoClosedForm("margin loss on a multi-class bounded set");
        return binary_margin_cstar(loss.phi, pt.prob[0], R);
    case LossKind::comp_sum:
        if (cls.variant == ClassVariant::CompleteSymmetric || cls.variant == ClassVariant::AllMeasurable)
            return comp_sum_cstar_complete(loss.tau, pt.prob);
        if (cls.variant == ClassVariant::BoundedSymmetric) {
            if (!is_one_hot(pt.prob))
                throw NoClosedForm("comp-sum on a bounded set: closed form only for deterministic points");
            return phi_tau(loss.tau, std::exp(-2.0 * cls.Lambda_bound) * (pt.classes() - 1));
        }
        throw NoClosedForm("comp-sum: unsupported class");
    default:
        throw NoClosedForm("no closed-form minimal conditional risk for " + loss.name());
    }
}

// ---------------------------------------------------------------- oracle

namespace {

using FnN = std::function<double(const std::vector<double>&)>;

double box_minimize(const FnN& f, int k, double R, int res) {
    std::vector<double> v(k, 0.0);
    double best = safe_value(f(v));

    if (k == 1) {
        auto r = grid_then_golden([&](double a) { return f({a}); }, -R, R, res, 1e-12);
        return std::min(best, r.f);
    }

    // Coarse full grid for a starting point.
    int m = k == 2 ? std::min(res, 257) : (k <= 4 ? 17 : 1);
    if (m > 1) {
        auto g = linspace(-R, R, m);
        std::vector<int> idx(k, 0);
        std::vector<double> cur(k);
        for (;;) {
            for (int i = 0; i < k; ++i) cur[i] = g[idx[i]];
            double val = safe_value(f(cur));
            if (val < best) {
                best = val;
                v = cur;
            }
            int i = 0;
            while (i < k && ++idx[i] == m) idx[i++] = 0;
            if (i == k) break;
        }
    }

    // Cyclic coordinate refinement: grid + golden along each axis.
    const int line_pts = std::min(res, 257);
    for (int sweep = 0; sweep < 400; ++sweep) {
        double before = best;
        for (int i = 0; i < k; ++i) {
            auto line = [&](double a) {
                auto w = v;
                w[i] = a;
                return f(w);
            };
            auto r = grid_then_golden(line, -R, R, line_pts, 1e-13);
            if (r.f <= best) {
                best = r.f;
                v[i] = r.x;
            }
        }
        if (before - best <= 1e-15 * std::max(1.0, std::abs(best))) break;
    }
    return best;
}

} // namespace

double brute_force_conditional_oracle(const Loss& loss, const HypothesisClassSpec& cls, const ConditionalPoint& pt,
                                      int grid_resolution, double surrogate_radius) {
    pt.validate();
    if (grid_resolution < 16) throw DomainError("oracle: grid resolution must be >= 16");
    double R = cls.score_radius(pt.norm_of_x);
    const bool unbounded = !std::isfinite(R);
    if (unbounded) {
        if (!(surrogate_radius > 0))
            throw Unsupported("oracle: unbounded class needs a surrogate radius");
        R = surrogate_radius;
    }
    const int n = pt.classes();

    switch (loss.kind) {
    case LossKind::zero_one:
    case LossKind::margin:
        if (loss.binary) {
            auto f = [&](double h) { return conditional_risk(loss, {h}, pt); };
            if (loss.kind == LossKind::zero_one) {
                double best = kInf;
                for (double h : linspace(-R, R, grid_resolution)) best = std::min(best, f(h));
                return best;
            }
            return grid_then_golden(f, -R, R, grid_resolution, 1e-13).f;
        }
        [[fallthrough]];
    case LossKind::comp_sum:
    case LossKind::max_loss: {
        // Complete classes are shift invariant: pin the last score at 0.
        int k = unbounded ? n - 1 : n;
        FnN f = [&](const std::vector<double>& v) {
            std::vector<double> s(v);
            if (unbounded) s.push_back(0.0);
            return conditional_risk(loss, s, pt);
        };
        return box_minimize(f, k, R, grid_resolution);
    }
    case LossKind::constrained: {
        FnN f = [&](const std::vector<double>& v) {
            std::vector<double> s(v);
            s.push_back(-std::accumulate(v.begin(), v.end(), 0.0));
            if (!unbounded && std::abs(s.back()) > R) return kInf;
            return conditional_risk(loss, s, pt);
        };
        return box_minimize(f, n - 1, R, grid_resolution);
    }
    case LossKind::adv_zero_one:
    case LossKind::sup_margin: {
        if (cls.variant != ClassVariant::Linear)
            throw Unsupported("oracle: adversarial losses are searched on the linear class only");
        // Search (w, b) in [-W, W] x [-B, B] at a 1-D input of magnitude |x|.
        const double x = pt.norm_of_x;
        FnN f = [&](const std::vector<double>& v) {
            double w = cls.W * v[0], b = cls.B * v[1];
            double h = w * x + b, r = cls.gamma * std::abs(w);
            return conditional_risk(loss, {h - r, h + r}, pt);
        };
        return box_minimize(f, 2, 1.0, grid_resolution);
    }
    default:
        throw Unsupported("oracle: " + loss.name() + " needs a hypothesis-level search");
    }
}

double generalization_risk(const Loss& loss, const std::vector<std::vector<double>>& scores_per_point,
                           const DiscreteDistribution& dist) {
    if (scores_per_point.size() != dist.points.size())
        throw DomainError("generalization risk: one score vector per support point required");
    KahanSum acc;
    for (size_t i = 0; i < dist.points.size(); ++i)
        acc += dist.points[i].weight * conditional_risk(loss, scores_per_point[i], dist.points[i].point);
    return acc.value();
}

// ---------------------------------------------------------------- gaps

namespace {

double point_feature(const ConditionalPoint& pt) {
    return pt.x.empty() ? pt.norm_of_x : pt.x.at(0);
}

std::vector<double> linear_scores(const Loss& loss, double w, double b, double x, double gamma) {
    double h = w * x + b;
    if (loss.kind == LossKind::adv_zero_one || loss.kind == LossKind::sup_margin)
        return {h - gamma * std::abs(w), h + gamma * std::abs(w)};
    return {h};
}

} // namespace

Linear1dFit fit_linear_1d(const Loss& loss, const HypothesisClassSpec& cls, const DiscreteDistribution& dist,
                          int grid) {
    if (cls.variant != ClassVariant::Linear) throw Unsupported("1-D fit: linear class required");
    if (!loss.binary) throw Unsupported("1-D fit: binary loss required");
    auto risk = [&](double w, double b) {
        KahanSum acc;
        for (const auto& wp : dist.points)
            acc += wp.weight *
                   conditional_risk(loss, linear_scores(loss, w, b, point_feature(wp.point), cls.gamma), wp.point);
        return acc.value();
    };
    auto ws = linspace(-cls.W, cls.W, grid);
    auto bs = linspace(-cls.B, cls.B, grid);
    Linear1dFit best{0, 0, kInf};
    for (double w : ws)
        for (double b : bs) {
            double r = risk(w, b);
            if (r < best.risk) best = {w, b, r};
        }
    const bool piecewise_constant = loss.kind == LossKind::zero_one || loss.kind == LossKind::adv_zero_one;
    if (!piecewise_constant) {
        for (int sweep = 0; sweep < 100; ++sweep) {
            double before = best.risk;
            auto rw = golden_section([&](double w) { return risk(w, best.b); }, -cls.W, cls.W, 1e-12);
            if (rw.f <= best.risk) best = {rw.x, best.b, rw.f};
            auto rb = golden_section([&](double b) { return risk(best.w, b); }, -cls.B, cls.B, 1e-12);
            if (rb.f <= best.risk) best = {best.w, rb.x, rb.f};
            if (before - best.risk <= 1e-15) break;
        }
    }
    return best;
}

double comp_sum_gap_deterministic(double tau, double Lambda, int n, double R_star_tau0) {
    const double c0 = std::exp(-2.0 * Lambda) * (n - 1);
    if (R_star_tau0 < c0 - 1e-15)
        throw DomainError("deterministic gap: R* for tau = 0 must be at least e^{-2 Lambda}(n - 1)");
    return phi_tau(tau, R_star_tau0) - phi_tau(tau, c0);
}

GapReport minimizability_gap(const Loss& loss, const HypothesisClassSpec& cls, const DiscreteDistribution& dist,
                             GapMode mode, const GapOptions& opt) {
    dist.validate();
    auto cstar = [&](const ConditionalPoint& pt) {
        try {
            return best_in_class_conditional(loss, cls, pt);
        } catch (const NoClosedForm&) {
            return brute_force_conditional_oracle(loss, cls, pt, 4096, opt.surrogate_radius);
        }
    };
    GapReport rep;
    switch (mode) {
    case GapMode::decoupled: {
        KahanSum acc;
        for (const auto& wp : dist.points) acc += wp.weight * cstar(wp.point);
        rep.best_in_class_risk = rep.expected_pointwise_infimum = acc.value();
        rep.gap = 0.0;
        return rep;
    }
    case GapMode::linear_1d_grid: {
        auto fit = fit_linear_1d(loss, cls, dist, opt.grid);
        KahanSum acc;
        for (const auto& wp : dist.points) {
            ConditionalPoint pt = wp.point;
            pt.norm_of_x = std::abs(point_feature(pt));
            acc += wp.weight * cstar(pt);
        }
        rep.best_in_class_risk = fit.risk;
        rep.expected_pointwise_infimum = acc.value();
        rep.gap = rep.best_in_class_risk - rep.expected_pointwise_infimum;
        return rep;
    }
    case GapMode::deterministic_bounded_formula: {
        if (loss.kind != LossKind::comp_sum || cls.variant != ClassVariant::BoundedSymmetric)
            throw Unsupported("deterministic gap formula: comp-sum loss on a bounded symmetric class only");
        for (const auto& wp : dist.points)
            if (!is_one_hot(wp.point.prob))
                throw Unsupported("deterministic gap formula: distribution must be deterministic");
        if (opt.R_star_tau0 < 0) throw DomainError("deterministic gap formula: R* for tau = 0 not supplied");
        const double c0 = std::exp(-2.0 * cls.Lambda_bound) * (cls.n - 1);
        rep.best_in_class_risk = phi_tau(loss.tau, opt.R_star_tau0);
        rep.expected_pointwise_infimum = phi_tau(loss.tau, c0);
        rep.gap = comp_sum_gap_deterministic(loss.tau, cls.Lambda_bound, cls.n, opt.R_star_tau0);
        return rep;
    }
    }
    throw Unsupported("minimizability gap: unknown mode");
}

GapOrdering gap_ordering_check(double Lambda, int n, double R_star_tau0, const std::vector<double>& taus) {
    GapOrdering out;
    out.taus = taus;
    for (double t : taus) out.gaps.push_back(comp_sum_gap_deterministic(t, Lambda, n, R_star_tau0));
    for (size_t i = 0; i + 1 < out.gaps.size(); ++i) {
        if (taus[i + 1] < taus[i]) throw DomainError("gap ordering: taus must be ascending");
        double m = out.gaps[i] - out.gaps[i + 1];
        out.margins.push_back(m);
        if (m < -1e-12) out.nonincreasing = false;
    }
    return out;
}

} // namespace hc
