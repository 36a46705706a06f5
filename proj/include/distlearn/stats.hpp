#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace distlearn {

// two-sided 95% normal quantile
inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

// Wilson score interval for a binomial proportion. Chosen over Wald because
// the Monte Carlo success rates of interest sit near 0 and 1.
inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                      double z = kZ95) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        (z / denom) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    // the score interval hits the boundary exactly at boundary counts;
    // keep it exact instead of a rounding hair inside
    if (successes == 0) ci.low = 0.0;
    if (successes == trials) ci.high = 1.0;
    return ci;
}

} // namespace distlearn
