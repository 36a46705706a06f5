#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "distlearn/rng.hpp"
#include "distlearn/stats.hpp"

namespace distlearn {

enum class CountRegime {
    ExactTotal, // multinomial occupancy: the total is fixed
    Poissonized // independent Poisson bins: the total is random
};

// Occupancy of N bins: either the counts of m uniform balls (dependent,
// total exactly m) or N independent Poisson(rate) draws.
struct OccupancyCounts {
    std::vector<std::uint64_t> bins;
    std::uint64_t total = 0;
    CountRegime regime = CountRegime::ExactTotal;
};

// m i.i.d. uniform throws into N bins, one ball at a time.
OccupancyCounts multinomial_counts(std::uint64_t bins, std::uint64_t balls,
                                   std::uint64_t seed);

// N independent Poisson(rate) bins.
OccupancyCounts poisson_counts(std::uint64_t bins, double rate, std::uint64_t seed);

// One Poisson draw: sequential-search inversion below rate 30, transformed
// rejection (PTRS) above. Exposed for the distribution-law tests.
std::uint64_t poisson_sample(Xoshiro256ss& rng, double rate);

// sum_j |bins_j - m/N| over all N bins. For exact-total counts this equals
// 2m times the TV distance between the induced empirical distribution and
// uniform.
double discrepancy_stat(const OccupancyCounts& counts, std::uint64_t reference_total,
                        std::uint64_t bins);

using CountsPredicate = std::function<bool(const OccupancyCounts&)>;
using CountsGenerator = std::function<OccupancyCounts(std::uint64_t trial_seed)>;

struct EventEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double estimate = 0.0;
    WilsonInterval ci;
};

// Monte Carlo probability of an event over independently seeded trials.
EventEstimate event_probability(const CountsPredicate& event, const CountsGenerator& generator,
                                std::uint64_t trials, std::uint64_t seed);

// Statistical check of the factor-4 transfer from exact-total occupancy to
// independent Poisson bins, valid for events monotone in the total. The
// caller asserts monotonicity; this routine only measures. `holds` is
//   estimate_exact <= 4 * estimate_poisson + slack
// with slack the exact arm's upper CI slack plus 4x the Poisson arm's.
struct PoissonizationReport {
    EventEstimate exact_arm;   // multinomial counts, total fixed
    EventEstimate poisson_arm; // independent Poisson(m/N) bins
    double slack = 0.0;
    bool holds = false;
};

PoissonizationReport poissonization_check(const CountsPredicate& event, std::uint64_t bins,
                                          std::uint64_t balls, std::uint64_t trials,
                                          std::uint64_t seed);

} // namespace distlearn
