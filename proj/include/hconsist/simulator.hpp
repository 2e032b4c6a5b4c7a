#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hc {

enum class Scenario { nonadversarial, adversarial };

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

struct SimulationSpec {
    Scenario scenario = Scenario::nonadversarial;
    double sigma = 0.1;
    double gamma = 0.1;                // adversarial only
    std::int64_t sample_count = 1000000;
    std::uint64_t seed = 1;
    int shards = 16;
    double a = -5.0;                   // h(x) = a x + b
    double b = 0.0;
    std::vector<std::string> losses;   // empty: the three losses of the scenario

    void validate() const;
    std::vector<std::string> effective_losses() const;
};

struct Sample {
    double x;
    int y;  // +1 or -1
};

/// Truncated normal with pre-truncation location/scale (mu, s) on [lo, hi].
struct TruncatedNormal {
    double mu, s, lo, hi;

    /// Inverse CDF on the truncated interval, u in (0, 1).
    double quantile(double u) const;
};

/// Counter-based stream: SplitMix64 over a key derived from (seed, stream).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    double uniform();  // open interval (0, 1)

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// The i.i.d. draw used by every shard.
Sample draw_sample(const SimulationSpec& spec, CounterRng& rng);

/// All sample_count draws in shard order (deterministic for fixed seed and shards).
std::vector<Sample> sample_distribution(const SimulationSpec& spec);

struct LossEstimate {
    std::string loss;
    double risk_target = 0.0;
    double se_target = 0.0;
    double risk_surrogate = 0.0;
    double se_surrogate = 0.0;
    double slack = 0.0;  // risk_surrogate - risk_target
};

struct SimResult {
    double sigma = 0.0;
    std::vector<LossEstimate> rows;
};

SimResult estimate_risks(const SimulationSpec& spec);

/// Population risks: exact point masses plus a midpoint rule with `nodes`
/// nodes in probability space for the truncated-normal component.
SimResult quadrature_risks(const SimulationSpec& spec, int nodes = 100000);

std::vector<SimResult> sweep_sigma(const SimulationSpec& spec, const std::vector<double>& sigmas);

extern const char* const kSimulateSchema;
void write_sweep_csv(std::ostream& os, const std::vector<SimResult>& results);

/// Worker threads for shard parallelism; HCONSIST_THREADS caps it.
int worker_threads(int shards);

} // namespace hc
