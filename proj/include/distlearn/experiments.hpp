#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "distlearn/core.hpp"
#include "distlearn/rng.hpp"
#include "distlearn/stats.hpp"

namespace distlearn {

enum class Estimator { Emp, Pemp };

enum class TvMode {
    Exact, // exact TV against the target (needs an enumerable space for pemp)
    Bound  // subadditive marginal-sum upper bound (pemp only); a bound <= eps
           // certifies success, a bound above eps is inconclusive
};

std::string to_string(Estimator e);
std::string to_string(TvMode mode);

// A Monte Carlo sweep over sample counts. Fully deterministic given
// master_seed: every trial draws from its own derived stream and results
// are folded in trial order, so the thread count never changes output.
struct SweepConfig {
    std::uint32_t n = 1;            // dimensions
    std::uint32_t k = 2;            // per-dimension cardinality
    double epsilon = 0.1;           // success means tv <= epsilon
    std::vector<std::uint64_t> m_grid;
    std::uint64_t trials = 200;
    Estimator estimator = Estimator::Emp;
    std::uint64_t master_seed = 1;
    // empty target = uniform over the space
    std::optional<ProductDistribution> target;
    TvMode tv_mode = TvMode::Exact;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
    unsigned threads = 1;

    SpaceSpec space() const;
    // throws ConfigError for malformed configs and EnumerationError when
    // tv_mode=exact is requested on a space beyond the cap
    void validate() const;
};

struct SweepRecord {
    std::uint64_t m = 0;
    std::vector<double> tv_values; // per trial, in trial order
    std::uint64_t successes = 0;
    double success_rate = 0.0;
    WilsonInterval ci;
    double median_tv = 0.0;
    double mean_tv = 0.0;
    TvMode tv_mode = TvMode::Exact;
};

// Fixed derivation of per-trial seeds from (master, purpose, m, trial);
// thin name over derive_seed so experiment call sites read as intended.
// See the README for the bit-exact mixer.
inline std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t purpose_tag,
                                       std::uint64_t m, std::uint64_t trial_index) {
    return derive_seed(master_seed, purpose_tag, m, trial_index);
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config);

// Head-to-head comparison of the two estimators on identical sample sets.
struct GapReport {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    double epsilon = 0.0;
    std::uint64_t m = 0;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    std::vector<std::pair<double, double>> tv_pairs; // (emp, pemp) per trial
    double median_emp = 0.0;
    double median_pemp = 0.0;
    std::uint64_t witness_count = 0; // trials with tv_pemp < eps < tv_emp
    double witness_rate = 0.0;
    WilsonInterval witness_ci;
};

GapReport gap_experiment(std::uint32_t n, std::uint32_t k, double epsilon, std::uint64_t m,
                         std::uint64_t trials, std::uint64_t master_seed,
                         unsigned threads = 1,
                         std::uint64_t enumeration_cap = kDefaultEnumerationCap);

// Smallest m in the grid whose Wilson lower bound on the success rate
// reaches 1 - delta; empty when no grid point does.
std::optional<std::uint64_t> crossover_estimate(const SweepConfig& config, double delta);
std::optional<std::uint64_t> crossover_from_records(const std::vector<SweepRecord>& records,
                                                    double delta);

// CSV output; the header line is a stable schema.
std::string sweep_csv_header();
std::string sweep_csv(const SweepConfig& config, const std::vector<SweepRecord>& records);

} // namespace distlearn
