#pragma once

#include <cstdint>
#include <map>

#include "distlearn/core.hpp"

namespace distlearn {

// Distribution with finite support over a (possibly huge) product space.
// Atom masses are the exact rationals count/total: counts are kept as
// integers and converted to probability on read, so masses never drift no
// matter how large the sample is.
class SparseDistribution {
public:
    SparseDistribution(SpaceSpec space, std::map<Point, std::uint64_t> atom_counts);

    const SpaceSpec& space() const { return space_; }
    const std::map<Point, std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total() const { return total_; }
    std::size_t support_size() const { return counts_.size(); }

    // count(x)/total; zero off support. Throws InvalidPointError for points
    // outside the space.
    double mass(const Point& x) const;

private:
    SpaceSpec space_;
    std::map<Point, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

// The empirical distribution: uniform over the observed samples, i.e. mass
// count(x)/m at every sampled point. Throws EmptySampleError when m = 0.
SparseDistribution empirical_distribution(const SampleSet& samples, const SpaceSpec& space);

// The product empirical distribution: the product of the per-coordinate
// empirical marginals. Assigns positive mass to every combination of
// observed coordinate values, sampled or not.
ProductDistribution product_empirical_distribution(const SampleSet& samples,
                                                   const SpaceSpec& space);

} // namespace distlearn
