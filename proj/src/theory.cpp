#include "distlearn/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "distlearn/numeric.hpp"

namespace distlearn {

void BoundParams::validate() const {
    if (support_size < 1) throw std::invalid_argument("support size must be >= 1");
    if (!(samples >= 0.0) || !std::isfinite(samples)) {
        throw std::invalid_argument("sample count must be finite and >= 0");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
}

double folded_mean_lower_coefficient() {
    return 1.0 / (std::sqrt(std::numbers::pi) * std::exp(1.0 / 12.0));
}

namespace {

void require_positive_rate(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("rate must be finite and > 0");
    }
}

void require_rate_at_least_two(double lambda) {
    require_positive_rate(lambda);
    if (lambda < 2.0) {
        throw HypothesisError("bound needs rate >= 2, got " + std::to_string(lambda));
    }
}

} // namespace

double poisson_log_pmf(double lambda, std::uint64_t y) {
    require_positive_rate(lambda);
    const double yd = static_cast<double>(y);
    return yd * std::log(lambda) - lambda - std::lgamma(yd + 1.0);
}

double poisson_pmf(double lambda, std::uint64_t y) {
    return std::exp(poisson_log_pmf(lambda, y));
}

std::uint64_t poisson_truncation_point(double lambda) {
    require_positive_rate(lambda);
    return static_cast<std::uint64_t>(std::ceil(lambda + 40.0 * std::sqrt(lambda) + 40.0));
}

double folded_abs_mean_exact(double lambda) {
    require_positive_rate(lambda);
    const double fl = std::floor(lambda);
    const double log_value =
        std::numbers::ln2 + (fl + 1.0) * std::log(lambda) - lambda - std::lgamma(fl + 1.0);
    return std::exp(log_value);
}

double folded_abs_mean_by_summation(double lambda) {
    const std::uint64_t cutoff = poisson_truncation_point(lambda);
    NeumaierSum sum;
    for (std::uint64_t y = 0; y <= cutoff; ++y) {
        sum.add(poisson_pmf(lambda, y) * std::abs(static_cast<double>(y) - lambda));
    }
    return sum.value();
}

double folded_second_moment_by_summation(double lambda) {
    const std::uint64_t cutoff = poisson_truncation_point(lambda);
    NeumaierSum sum;
    for (std::uint64_t y = 0; y <= cutoff; ++y) {
        const double dev = static_cast<double>(y) - lambda;
        sum.add(poisson_pmf(lambda, y) * dev * dev);
    }
    return sum.value();
}

double poisson_pmf_truncated_total(double lambda) {
    const std::uint64_t cutoff = poisson_truncation_point(lambda);
    NeumaierSum sum;
    for (std::uint64_t y = 0; y <= cutoff; ++y) {
        sum.add(poisson_pmf(lambda, y));
    }
    return sum.value();
}

FoldedMomentBounds folded_moment_bounds(double lambda) {
    require_rate_at_least_two(lambda);
    return {folded_mean_lower_coefficient() * std::sqrt(lambda), lambda};
}

namespace {

// Binet remainder lgamma(n+1) - (1/2)ln(2 pi n) - n ln n + n: the exact
// logarithmic correction that the 1/(12n) Stirling term over-estimates.
// Long-double evaluation below 50; the asymptotic series beyond, where its
// truncation error (< 1e-21) sits far below the margins it is compared to.
double binet_remainder(double n) {
    if (n <= 50.0) {
        const long double nl = static_cast<long double>(n);
        const long double value =
            std::lgamma(nl + 1.0L) -
            0.5L * std::log(2.0L * std::numbers::pi_v<long double> * nl) -
            nl * std::log(nl) + nl;
        return static_cast<double>(value);
    }
    const double n2 = n * n;
    return (1.0 / 12.0 -
            (1.0 / 360.0 -
             (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * n2)) / n2) / n2) /
                n2) /
           n;
}

} // namespace

StirlingChainReport stirling_chain_check(double lambda) {
    require_rate_at_least_two(lambda);
    const double fl = std::floor(lambda);
    const double frac = lambda - fl; // exact

    // display values in log space
    const double log_exact =
        std::numbers::ln2 + (fl + 1.0) * std::log(lambda) - lambda - std::lgamma(fl + 1.0);
    const double log_floor_step =
        std::numbers::ln2 + (fl + 1.0) * std::log(fl) - fl - std::lgamma(fl + 1.0);
    const double log_sqrt_2_over_pi = 0.5 * (std::numbers::ln2 - std::log(std::numbers::pi));
    const double log_stirling_step = log_sqrt_2_over_pi + 0.5 * std::log(fl) - 1.0 / (12.0 * fl);
    const double log_final_step =
        log_sqrt_2_over_pi + 0.5 * std::log(lambda / 2.0) - 1.0 / 12.0;

    StirlingChainReport report;
    report.lambda = lambda;
    report.exact = std::exp(log_exact);
    report.floor_step = std::exp(log_floor_step);
    report.stirling_step = std::exp(log_stirling_step);
    report.final_step = std::exp(log_final_step);

    // Margins are the log differences, rearranged so nothing of magnitude
    // ~n log n gets subtracted: the stirling margin shrinks like 1/(360 n^3)
    // and naive differencing drowns it in rounding noise beyond n ~ 1000.
    report.log_margin_floor = (fl + 1.0) * std::log1p(frac / fl) - frac;
    report.log_margin_stirling = 1.0 / (12.0 * fl) - binet_remainder(fl);
    report.log_margin_final =
        0.5 * std::log(2.0 * fl / lambda) + 1.0 / 12.0 - 1.0 / (12.0 * fl);
    return report;
}

double chebyshev_failure_bound(const BoundParams& p) {
    p.validate();
    const double m = p.samples;
    const double n_points = static_cast<double>(p.support_size);
    const double coef = folded_mean_lower_coefficient();
    const double mean_lower = coef * std::sqrt(m * n_points);
    const double threshold = 2.0 * m * p.epsilon;
    if (!(threshold < mean_lower)) {
        throw BoundInapplicableError(
            "bound vacuous: 2*m*eps >= coef*sqrt(m*N) (needs m < coef^2*N/(4 eps^2))");
    }
    const double gap = mean_lower - threshold;
    return m / (gap * gap);
}

std::uint64_t erm_lower_threshold(std::uint64_t support_size, double epsilon, double c) {
    if (support_size < 1) throw std::invalid_argument("support size must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    }
    const double coef = folded_mean_lower_coefficient();
    if (!(c > 0.0 && c < coef * coef / 16.0)) {
        throw std::invalid_argument("c must lie in (0, coef^2/16 ~ 0.0168)");
    }
    const double value = std::floor(c * static_cast<double>(support_size) / (epsilon * epsilon));
    if (value >= static_cast<double>(std::numeric_limits<std::uint64_t>::max())) {
        throw std::overflow_error("threshold exceeds 64-bit counts");
    }
    return static_cast<std::uint64_t>(value);
}

std::uint64_t perm_sample_bound(std::uint32_t n, std::uint32_t k, double epsilon,
                                double delta, double big_constant) {
    if (n < 1 || k < 1) throw std::invalid_argument("need n >= 1 and k >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    if (!(big_constant > 0.0)) throw std::invalid_argument("constant must be > 0");
    const double value = std::ceil(big_constant * static_cast<double>(n) *
                                   static_cast<double>(k) * std::log(1.0 / delta) /
                                   (epsilon * epsilon));
    if (value >= static_cast<double>(std::numeric_limits<std::uint64_t>::max())) {
        throw std::overflow_error("bound exceeds 64-bit counts");
    }
    return static_cast<std::uint64_t>(value);
}

double distinct_samples_tv(std::uint64_t m, std::uint64_t support_size) {
    if (m < 1) throw std::invalid_argument("need at least one sample");
    if (m > support_size) {
        throw std::invalid_argument("more samples than points: distinctness impossible");
    }
    return 1.0 - static_cast<double>(m) / static_cast<double>(support_size);
}

} // namespace distlearn
