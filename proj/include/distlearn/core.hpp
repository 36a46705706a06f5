#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "distlearn/errors.hpp"

namespace distlearn {

using Coord = std::uint32_t;

// One point of a product space: a coordinate index per dimension.
using Point = std::vector<Coord>;

// Spaces above this size refuse full enumeration unless the caller raises
// the cap explicitly.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

// An n-dimensional finite product space with per-dimension cardinalities.
// Cardinalities may differ per dimension; the equal-k setting used by the
// experiments is the special case sizes = (k, ..., k).
class SpaceSpec {
public:
    explicit SpaceSpec(std::vector<Coord> sizes,
                       std::uint64_t enumeration_cap = kDefaultEnumerationCap);

    std::size_t dims() const { return sizes_.size(); }
    Coord size(std::size_t dim) const { return sizes_[dim]; }
    const std::vector<Coord>& sizes() const { return sizes_; }
    std::uint64_t enumeration_cap() const { return enumeration_cap_; }

    // Product of the cardinalities; empty when it overflows 64 bits.
    // Overflowing spaces are still usable pointwise, they just cannot be
    // enumerated.
    std::optional<std::uint64_t> total_size_checked() const { return total_size_; }

    // Throws EnumerationError when the size does not fit in 64 bits.
    std::uint64_t total_size() const;

    bool enumerable() const {
        return total_size_.has_value() && *total_size_ <= enumeration_cap_;
    }

    bool contains(const Point& x) const;
    void require_point(const Point& x) const; // throws InvalidPointError

private:
    std::vector<Coord> sizes_;
    std::uint64_t enumeration_cap_;
    std::optional<std::uint64_t> total_size_;
};

// Probability mass function on a single finite set {0, ..., K-1}.
// Construction renormalizes inputs whose total deviates from 1 by at most
// 1e-6 and rejects anything worse; afterwards the total is within 1e-9 of 1.
class DenseDistribution {
public:
    explicit DenseDistribution(std::vector<double> probs);

    static DenseDistribution uniform(std::size_t size);

    std::size_t size() const { return probs_.size(); }
    double prob(std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

inline constexpr double kRenormalizableDeviation = 1e-6;
inline constexpr double kNormalizationTolerance = 1e-9;

// Product of independent per-dimension marginals. The mass of a point is
// the product of the marginal masses.
class ProductDistribution {
public:
    ProductDistribution(SpaceSpec space, std::vector<DenseDistribution> marginals);
    explicit ProductDistribution(std::vector<DenseDistribution> marginals,
                                 std::uint64_t enumeration_cap = kDefaultEnumerationCap);

    const SpaceSpec& space() const { return space_; }
    std::size_t dims() const { return marginals_.size(); }
    const DenseDistribution& marginal(std::size_t j) const { return marginals_[j]; }
    const std::vector<DenseDistribution>& marginals() const { return marginals_; }

    double mass(const Point& x) const; // throws InvalidPointError

private:
    SpaceSpec space_;
    std::vector<DenseDistribution> marginals_;
};

// m i.i.d. draws plus the seed that produced them.
struct SampleSet {
    std::vector<Point> points;
    std::uint64_t seed = 0;

    std::uint64_t size() const { return points.size(); }
};

ProductDistribution uniform_product(const SpaceSpec& space);

// Mixed-radix encoding of a point, dimension 0 most significant. Bijective
// with unflatten_index on any space whose total size fits in 64 bits.
std::uint64_t flatten_index(const Point& x, const SpaceSpec& space);
Point unflatten_index(std::uint64_t index, const SpaceSpec& space);

// Draws m i.i.d. points, each coordinate sampled independently from its
// marginal by inverse-CDF lookup. Pure function of (dist, m, seed).
SampleSet draw_samples(const ProductDistribution& dist, std::uint64_t m,
                       std::uint64_t seed);

// Occurrence counts of the sampled points; counts sum to m.
std::map<Point, std::uint64_t> counts(const SampleSet& samples, const SpaceSpec& space);

// Visits every point of an enumerable space in flatten_index order.
template <typename Fn>
void for_each_point(const SpaceSpec& space, Fn&& fn) {
    if (!space.enumerable()) {
        throw EnumerationError("space too large to enumerate");
    }
    const std::size_t n = space.dims();
    const std::uint64_t total = space.total_size();
    Point x(n, 0);
    for (std::uint64_t i = 0; i < total; ++i) {
        fn(static_cast<const Point&>(x));
        for (std::size_t j = n; j-- > 0;) {
            if (++x[j] < space.size(j)) break;
            x[j] = 0;
        }
    }
}

} // namespace distlearn
