#include "hconsist/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "hconsist/aux_function.hpp"
#include "hconsist/error.hpp"
#include "hconsist/losses.hpp"
#include "hconsist/numeric.hpp"
#include "hconsist/risk.hpp"

namespace hc {

const char* const kSimulateSchema = "# schema=hconsist.simulate.v1";

Scenario scenario_from_name(const std::string& name) {
    if (name == "nonadversarial" || name == "nonadv") return Scenario::nonadversarial;
    if (name == "adversarial" || name == "adv") return Scenario::adversarial;
    throw DomainError("unknown scenario: " + name);
}

std::string scenario_name(Scenario s) {
    return s == Scenario::nonadversarial ? "nonadversarial" : "adversarial";
}

namespace {

// Truncated-normal component of each scenario.
TruncatedNormal component(const SimulationSpec& spec) {
    if (spec.scenario == Scenario::nonadversarial) return {spec.sigma, spec.sigma, spec.sigma, 1.0};
    const double top = spec.gamma - spec.sigma;
    return {top, spec.sigma, -1.0, top};
}

struct PointMass {
    double weight;
    Sample s;
};

// Both scenarios put 1/16 on (1, -1) and on (-1, +1); the remaining 7/8 is
// the truncated-normal part. In the nonadversarial case that part is the +1
// component on [sigma, 1] and its mirror with label -1, 7/16 each.
const PointMass kAtoms[] = {{1.0 / 16, {1.0, -1}}, {1.0 / 16, {-1.0, +1}}};
constexpr double kContinuousWeight = 7.0 / 8;

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Evaluator {
public:
    Evaluator(const SimulationSpec& spec, const std::string& loss)
        : adv_(spec.scenario == Scenario::adversarial), gamma_(spec.gamma), a_(spec.a), b_(spec.b),
          phi_(phi::by_name(loss)), target_(adv_ ? Loss::adv_zero_one() : Loss::zero_one(true)), x_(1) {
        h_.w = {{spec.a}};
        h_.b = {spec.b};
    }

    double target(const Sample& s) {
        const double h = a_ * s.x + b_;
        const int idx = s.y == 1 ? 0 : 1;
        if (!adv_) {
            scores1_[0] = h;
            return target_(scores1_, idx);
        }
        const double r = gamma_ * std::abs(a_);
        scores2_[0] = h - r;
        scores2_[1] = h + r;
        return target_(scores2_, idx);
    }

    double surrogate(const Sample& s) {
        if (!adv_) return eval_margin_loss(phi_, s.y * (a_ * s.x + b_));
        x_[0] = s.x;
        return eval_sup_margin_linear(phi_, h_, x_, s.y, gamma_, 2.0);
    }

private:
    bool adv_;
    double gamma_, a_, b_;
    AuxiliaryFunction phi_;
    Loss target_;
    LinearHypothesis h_;
    std::vector<double> x_;
    std::vector<double> scores1_ = std::vector<double>(1);
    std::vector<double> scores2_ = std::vector<double>(2);
};

struct Moments {
    KahanSum sum, sumsq;

    void add(double v) {
        sum += v;
        sumsq += v * v;
    }
};

struct ShardAccum {
    std::vector<Moments> target, surrogate;
};

template <class F>
void run_parallel(int tasks, F&& f) {
    const int nt = std::min(worker_threads(tasks), tasks);
    if (nt <= 1) {
        for (int i = 0; i < tasks; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < tasks; i += nt) f(i);
        });
    for (auto& th : pool) th.join();
}

std::int64_t shard_begin(const SimulationSpec& spec, int shard) {
    return spec.sample_count * shard / spec.shards;
}

} // namespace

// ---------------------------------------------------------------- spec

void SimulationSpec::validate() const {
    if (!(sigma > 0)) throw DomainError("simulate: sigma must be positive");
    if (sample_count < 10000) throw DomainError("simulate: sample_count must be at least 1e4");
    if (shards < 1) throw DomainError("simulate: shards must be positive");
    if (scenario == Scenario::adversarial && !(gamma > 0)) throw DomainError("simulate: gamma must be positive");
    auto c = component(*this);
    if (!(c.hi > c.lo) || sigma >= c.hi - c.lo)
        throw DomainError("simulate: degenerate truncation interval for sigma");
    for (const auto& id : losses) {
        auto f = phi::by_name(id);
        if (!phi::is_margin_entry(f)) throw DomainError("simulate: " + id + " is not a margin loss");
    }
}

std::vector<std::string> SimulationSpec::effective_losses() const {
    if (!losses.empty()) return losses;
    if (scenario == Scenario::nonadversarial) return {"quadratic", "logistic", "exp"};
    return {"rho", "hinge", "sigmoid"};
}

double TruncatedNormal::quantile(double u) const {
    static const boost::math::normal_distribution<double> N01;
    const double a = (lo - mu) / s, b = (hi - mu) / s;
    double z;
    if (a >= 0) {
        // Both ends in the upper tail: work with survival probabilities.
        const double qa = cdf(complement(N01, a)), qb = cdf(complement(N01, b));
        z = boost::math::quantile(complement(N01, qa - u * (qa - qb)));
    } else {
        const double pa = cdf(N01, a), pb = cdf(N01, b);
        z = boost::math::quantile(N01, pa + u * (pb - pa));
    }
    return std::clamp(mu + s * z, lo, hi);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix(seed ^ splitmix(stream + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::next() {
    return splitmix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
}

double CounterRng::uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

Sample draw_sample(const SimulationSpec& spec, CounterRng& rng) {
    const double u = rng.uniform();
    const auto tn = component(spec);
    if (spec.scenario == Scenario::nonadversarial) {
        if (u < 1.0 / 16) return {1.0, -1};
        if (u < 2.0 / 16) return {-1.0, +1};
        const double x = tn.quantile(rng.uniform());
        return u < 9.0 / 16 ? Sample{x, +1} : Sample{-x, -1};
    }
    if (u < 1.0 / 16) return {1.0, -1};
    if (u < 2.0 / 16) return {-1.0, +1};
    return {tn.quantile(rng.uniform()), -1};
}

std::vector<Sample> sample_distribution(const SimulationSpec& spec) {
    spec.validate();
    std::vector<Sample> out(static_cast<std::size_t>(spec.sample_count));
    run_parallel(spec.shards, [&](int shard) {
        CounterRng rng(spec.seed, static_cast<std::uint64_t>(shard));
        for (std::int64_t i = shard_begin(spec, shard); i < shard_begin(spec, shard + 1); ++i)
            out[static_cast<std::size_t>(i)] = draw_sample(spec, rng);
    });
    return out;
}

// ---------------------------------------------------------------- estimation

SimResult estimate_risks(const SimulationSpec& spec) {
    spec.validate();
    const auto losses = spec.effective_losses();
    const std::size_t L = losses.size();
    std::vector<ShardAccum> acc(spec.shards);

    run_parallel(spec.shards, [&](int shard) {
        std::vector<Evaluator> ev;
        for (const auto& id : losses) ev.emplace_back(spec, id);
        auto& a = acc[shard];
        a.target.resize(L);
        a.surrogate.resize(L);
        CounterRng rng(spec.seed, static_cast<std::uint64_t>(shard));
        for (std::int64_t i = shard_begin(spec, shard); i < shard_begin(spec, shard + 1); ++i) {
            const Sample s = draw_sample(spec, rng);
            for (std::size_t k = 0; k < L; ++k) {
                a.target[k].add(ev[k].target(s));
                a.surrogate[k].add(ev[k].surrogate(s));
            }
        }
    });

    const double N = static_cast<double>(spec.sample_count);
    auto finish = [N](const std::vector<ShardAccum>& all, bool tgt, std::size_t k, double& mean, double& se) {
        KahanSum s, q;
        for (const auto& a : all) {
            const auto& m = tgt ? a.target[k] : a.surrogate[k];
            s += m.sum.value();
            q += m.sumsq.value();
        }
        mean = s.value() / N;
        const double var = std::max(0.0, (q.value() - N * mean * mean) / (N - 1.0));
        se = std::sqrt(var / N);
    };

    SimResult r;
    r.sigma = spec.sigma;
    for (std::size_t k = 0; k < L; ++k) {
        LossEstimate e;
        e.loss = losses[k];
        finish(acc, true, k, e.risk_target, e.se_target);
        finish(acc, false, k, e.risk_surrogate, e.se_surrogate);
        e.slack = e.risk_surrogate - e.risk_target;
        r.rows.push_back(e);
    }
    return r;
}

SimResult quadrature_risks(const SimulationSpec& spec, int nodes) {
    spec.validate();
    if (nodes < 1) throw DomainError("quadrature: nodes must be positive");
    const auto tn = component(spec);
    const double w_node = 1.0 / nodes;

    SimResult r;
    r.sigma = spec.sigma;
    for (const auto& id : spec.effective_losses()) {
        Evaluator ev(spec, id);
        KahanSum t, s;
        for (const auto& pm : kAtoms) {
            t += pm.weight * ev.target(pm.s);
            s += pm.weight * ev.surrogate(pm.s);
        }
        KahanSum ct, cs;
        for (int i = 0; i < nodes; ++i) {
            const double x = tn.quantile((i + 0.5) * w_node);
            if (spec.scenario == Scenario::nonadversarial) {
                const Sample pos{x, +1}, neg{-x, -1};
                ct += 0.5 * (ev.target(pos) + ev.target(neg));
                cs += 0.5 * (ev.surrogate(pos) + ev.surrogate(neg));
            } else {
                const Sample neg{x, -1};
                ct += ev.target(neg);
                cs += ev.surrogate(neg);
            }
        }
        t += kContinuousWeight * w_node * ct.value();
        s += kContinuousWeight * w_node * cs.value();
        LossEstimate e;
        e.loss = id;
        e.risk_target = t.value();
        e.risk_surrogate = s.value();
        e.slack = e.risk_surrogate - e.risk_target;
        r.rows.push_back(e);
    }
    return r;
}

std::vector<SimResult> sweep_sigma(const SimulationSpec& spec, const std::vector<double>& sigmas) {
    if (sigmas.empty()) throw DomainError("sweep: no sigma values");
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (!(sigmas[i] > 0)) throw DomainError("sweep: sigmas must be positive");
        if (i > 0 && !(sigmas[i] < sigmas[i - 1])) throw DomainError("sweep: sigmas must be descending");
    }
    std::vector<SimResult> out;
    for (double s : sigmas) {
        SimulationSpec one = spec;
        one.sigma = s;
        out.push_back(estimate_risks(one));
    }
    return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SimResult>& results) {
    os << kSimulateSchema << '\n';
    os << "sigma,loss,risk_target,se_target,risk_surrogate,se_surrogate,slack\n";
    os.precision(17);
    for (const auto& r : results)
        for (const auto& e : r.rows)
            os << r.sigma << ',' << e.loss << ',' << e.risk_target << ',' << e.se_target << ','
               << e.risk_surrogate << ',' << e.se_surrogate << ',' << e.slack << '\n';
}

int worker_threads(int shards) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("HCONSIST_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, std::min(n, shards));
}

} // namespace hc
