#pragma once

// Test-only oracles, deliberately written on independent paths from the
// library: long-double accumulation instead of compensated sums, direct
// enumeration instead of the sparse decomposition.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "distlearn/core.hpp"
#include "distlearn/estimators.hpp"
#include "distlearn/rng.hpp"

namespace oracles {

using distlearn::Coord;
using distlearn::Point;
using distlearn::ProductDistribution;
using distlearn::SampleSet;
using distlearn::SpaceSpec;

// TV between an empirical count map and a product target by enumerating the
// whole space.
inline double tv_brute_force(const std::map<Point, std::uint64_t>& counts, std::uint64_t m,
                             const ProductDistribution& target, const SpaceSpec& space) {
    long double l1 = 0.0L;
    distlearn::for_each_point(space, [&](const Point& x) {
        long double target_mass = 1.0L;
        for (std::size_t j = 0; j < space.dims(); ++j) {
            target_mass *= static_cast<long double>(target.marginal(j).prob(x[j]));
        }
        const auto it = counts.find(x);
        const long double emp_mass =
            it == counts.end()
                ? 0.0L
                : static_cast<long double>(it->second) / static_cast<long double>(m);
        l1 += std::abs(emp_mass - target_mass);
    });
    return static_cast<double>(0.5L * l1);
}

inline double tv_dense_brute_force(const std::vector<double>& p, const std::vector<double>& q) {
    long double l1 = 0.0L;
    for (std::size_t i = 0; i < p.size(); ++i) {
        l1 += std::abs(static_cast<long double>(p[i]) - static_cast<long double>(q[i]));
    }
    return static_cast<double>(0.5L * l1);
}

// Regularized incomplete gamma Q(a, x) = 1 - P(a, x) via the classic series
// and continued-fraction pair; good to ~1e-12 which is plenty for GOF
// p-values.
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        // series for P(a, x)
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 2000; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefactor);
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 2000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefactor) * h;
}

// chi-square upper-tail p-value
inline double chi_square_p_value(double statistic, double dof) {
    return gamma_q(dof / 2.0, statistic / 2.0);
}

// Pearson GOF statistic of observed counts against expected probabilities.
inline double chi_square_statistic(const std::vector<std::uint64_t>& observed,
                                   const std::vector<double>& expected_prob,
                                   std::uint64_t total) {
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = expected_prob[i] * static_cast<double>(total);
        if (expected == 0.0) continue;
        const double diff = static_cast<double>(observed[i]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

// Random pmf of the given size: normalized exponentials (flat Dirichlet).
inline std::vector<double> random_pmf(distlearn::Xoshiro256ss& rng, std::size_t size) {
    std::vector<double> weights(size);
    long double total = 0.0L;
    for (auto& w : weights) {
        w = -std::log(1.0 - rng.uniform01());
        total += w;
    }
    std::vector<double> pmf(size);
    for (std::size_t i = 0; i < size; ++i) {
        pmf[i] = static_cast<double>(weights[i] / total);
    }
    return pmf;
}

// Random space with total size bounded by max_total.
inline SpaceSpec random_space(distlearn::Xoshiro256ss& rng, std::uint64_t max_total,
                              std::size_t max_dims = 6, Coord max_k = 8) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.below(max_dims));
    std::vector<Coord> sizes;
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < n; ++j) {
        Coord k = 1 + static_cast<Coord>(rng.below(max_k));
        while (total * k > max_total && k > 1) --k;
        sizes.push_back(k);
        total *= k;
    }
    return SpaceSpec(std::move(sizes));
}

inline ProductDistribution random_product(distlearn::Xoshiro256ss& rng,
                                          const SpaceSpec& space) {
    std::vector<distlearn::DenseDistribution> marginals;
    marginals.reserve(space.dims());
    for (std::size_t j = 0; j < space.dims(); ++j) {
        marginals.emplace_back(random_pmf(rng, space.size(j)));
    }
    return {space, std::move(marginals)};
}

} // namespace oracles
