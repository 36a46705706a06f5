#include "distlearn/poissonization.hpp"

#include <cmath>
#include <stdexcept>

#include "distlearn/numeric.hpp"

namespace distlearn {

namespace {

// inversion by sequential search; fine while e^{-rate} stays well above
// double underflow
std::uint64_t poisson_inversion(Xoshiro256ss& rng, double rate) {
    const double u = rng.uniform01();
    double pmf = std::exp(-rate);
    double cdf = pmf;
    std::uint64_t y = 0;
    // u < 1, cdf -> 1: terminates; the guard covers truncated fp tails
    const std::uint64_t guard = static_cast<std::uint64_t>(rate + 40.0 * std::sqrt(rate) + 60.0);
    while (u >= cdf && y < guard) {
        ++y;
        pmf *= rate / static_cast<double>(y);
        cdf += pmf;
    }
    return y;
}

// Hoermann's transformed rejection with squeeze (PTRS); exact for
// rate >= 10, no normal approximation involved
std::uint64_t poisson_ptrs(Xoshiro256ss& rng, double rate) {
    const double slam = std::sqrt(rate);
    const double loglam = std::log(rate);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = rng.uniform01() - 0.5;
        const double v = rng.uniform01();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + rate + 0.43);
        if (us >= 0.07 && v <= v_r) {
            return static_cast<std::uint64_t>(kf);
        }
        if (kf < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            kf * loglam - rate - std::lgamma(kf + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

} // namespace

std::uint64_t poisson_sample(Xoshiro256ss& rng, double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("rate must be finite and > 0");
    }
    if (rate < 30.0) return poisson_inversion(rng, rate);
    return poisson_ptrs(rng, rate);
}

OccupancyCounts multinomial_counts(std::uint64_t bins, std::uint64_t balls,
                                   std::uint64_t seed) {
    if (bins < 1) throw std::invalid_argument("need at least one bin");
    OccupancyCounts counts;
    counts.bins.assign(bins, 0);
    counts.total = balls;
    counts.regime = CountRegime::ExactTotal;
    Xoshiro256ss rng(seed);
    for (std::uint64_t i = 0; i < balls; ++i) {
        ++counts.bins[rng.below(bins)];
    }
    return counts;
}

OccupancyCounts poisson_counts(std::uint64_t bins, double rate, std::uint64_t seed) {
    if (bins < 1) throw std::invalid_argument("need at least one bin");
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("rate must be finite and > 0");
    }
    OccupancyCounts counts;
    counts.bins.assign(bins, 0);
    counts.regime = CountRegime::Poissonized;
    Xoshiro256ss rng(seed);
    for (std::uint64_t j = 0; j < bins; ++j) {
        const std::uint64_t y = poisson_sample(rng, rate);
        counts.bins[j] = y;
        counts.total += y;
    }
    return counts;
}

double discrepancy_stat(const OccupancyCounts& counts, std::uint64_t reference_total,
                        std::uint64_t bins) {
    if (counts.bins.size() != bins) {
        throw std::invalid_argument("bin count mismatch");
    }
    const double mean = static_cast<double>(reference_total) / static_cast<double>(bins);
    NeumaierSum sum;
    for (std::uint64_t c : counts.bins) {
        sum.add(std::abs(static_cast<double>(c) - mean));
    }
    return sum.value();
}

EventEstimate event_probability(const CountsPredicate& event, const CountsGenerator& generator,
                                std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    EventEstimate estimate;
    estimate.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const OccupancyCounts counts = generator(derive_seed(seed, kOccupancyTrialTag, 0, t));
        if (event(counts)) ++estimate.successes;
    }
    estimate.estimate = static_cast<double>(estimate.successes) / static_cast<double>(trials);
    estimate.ci = wilson_interval(estimate.successes, trials);
    return estimate;
}

PoissonizationReport poissonization_check(const CountsPredicate& event, std::uint64_t bins,
                                          std::uint64_t balls, std::uint64_t trials,
                                          std::uint64_t seed) {
    const double rate = static_cast<double>(balls) / static_cast<double>(bins);
    const std::uint64_t exact_seed = derive_seed(seed, kGeneratorSplitTag, 1, 0);
    const std::uint64_t poisson_seed = derive_seed(seed, kGeneratorSplitTag, 2, 0);

    PoissonizationReport report;
    report.exact_arm = event_probability(
        event, [&](std::uint64_t s) { return multinomial_counts(bins, balls, s); }, trials,
        exact_seed);
    report.poisson_arm = event_probability(
        event, [&](std::uint64_t s) { return poisson_counts(bins, rate, s); }, trials,
        poisson_seed);

    report.slack = (report.exact_arm.ci.high - report.exact_arm.estimate) +
                   4.0 * (report.poisson_arm.ci.high - report.poisson_arm.estimate);
    report.holds =
        report.exact_arm.estimate <= 4.0 * report.poisson_arm.estimate + report.slack;
    return report;
}

} // namespace distlearn
