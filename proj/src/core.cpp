#include "distlearn/core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "distlearn/numeric.hpp"
#include "distlearn/rng.hpp"

namespace distlearn {

SpaceSpec::SpaceSpec(std::vector<Coord> sizes, std::uint64_t enumeration_cap)
    : sizes_(std::move(sizes)), enumeration_cap_(enumeration_cap) {
    if (sizes_.empty()) {
        throw std::invalid_argument("space needs at least one dimension");
    }
    std::uint64_t total = 1;
    bool overflow = false;
    for (Coord k : sizes_) {
        if (k < 1) throw std::invalid_argument("every dimension needs cardinality >= 1");
        if (!overflow) {
            if (total > std::numeric_limits<std::uint64_t>::max() / k) {
                overflow = true;
            } else {
                total *= k;
            }
        }
    }
    if (!overflow) total_size_ = total;
}

std::uint64_t SpaceSpec::total_size() const {
    if (!total_size_) {
        throw EnumerationError("total size of the space overflows 64 bits");
    }
    return *total_size_;
}

bool SpaceSpec::contains(const Point& x) const {
    if (x.size() != sizes_.size()) return false;
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
        if (x[j] >= sizes_[j]) return false;
    }
    return true;
}

void SpaceSpec::require_point(const Point& x) const {
    if (!contains(x)) {
        throw InvalidPointError("point does not belong to the space (arity " +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(sizes_.size()) + " or coordinate out of range)");
    }
}

DenseDistribution::DenseDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw std::invalid_argument("distribution needs at least one outcome");
    }
    NeumaierSum total;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw std::invalid_argument("probabilities must be finite and >= 0");
        }
        total.add(p);
    }
    const double sum = total.value();
    if (std::abs(sum - 1.0) > kRenormalizableDeviation) {
        throw std::invalid_argument("probabilities sum to " + std::to_string(sum) +
                                    "; deviation from 1 exceeds the renormalizable 1e-6");
    }
    if (sum != 1.0) {
        for (double& p : probs_) p /= sum;
    }
}

DenseDistribution DenseDistribution::uniform(std::size_t size) {
    if (size == 0) throw std::invalid_argument("distribution needs at least one outcome");
    return DenseDistribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

ProductDistribution::ProductDistribution(SpaceSpec space, std::vector<DenseDistribution> marginals)
    : space_(std::move(space)), marginals_(std::move(marginals)) {
    if (marginals_.size() != space_.dims()) {
        throw std::invalid_argument("marginal count must equal the space dimension");
    }
    for (std::size_t j = 0; j < marginals_.size(); ++j) {
        if (marginals_[j].size() != space_.size(j)) {
            throw std::invalid_argument("marginal " + std::to_string(j) +
                                        " does not match the dimension cardinality");
        }
    }
}

namespace {
std::vector<Coord> marginal_sizes(const std::vector<DenseDistribution>& marginals) {
    std::vector<Coord> sizes;
    sizes.reserve(marginals.size());
    for (const auto& m : marginals) sizes.push_back(static_cast<Coord>(m.size()));
    return sizes;
}
} // namespace

// space_ is declared before marginals_, so it is initialized from the sizes
// before the vector is moved away
ProductDistribution::ProductDistribution(std::vector<DenseDistribution> marginals,
                                         std::uint64_t enumeration_cap)
    : space_(marginal_sizes(marginals), enumeration_cap), marginals_(std::move(marginals)) {}

double ProductDistribution::mass(const Point& x) const {
    space_.require_point(x);
    double p = 1.0;
    for (std::size_t j = 0; j < marginals_.size(); ++j) {
        p *= marginals_[j].prob(x[j]);
    }
    return p;
}

ProductDistribution uniform_product(const SpaceSpec& space) {
    std::vector<DenseDistribution> marginals;
    marginals.reserve(space.dims());
    for (std::size_t j = 0; j < space.dims(); ++j) {
        marginals.push_back(DenseDistribution::uniform(space.size(j)));
    }
    return {space, std::move(marginals)};
}

std::uint64_t flatten_index(const Point& x, const SpaceSpec& space) {
    space.require_point(x);
    space.total_size(); // enumeration-unsupported when the size overflows
    std::uint64_t index = 0;
    for (std::size_t j = 0; j < space.dims(); ++j) {
        index = index * space.size(j) + x[j];
    }
    return index;
}

Point unflatten_index(std::uint64_t index, const SpaceSpec& space) {
    if (index >= space.total_size()) {
        throw std::out_of_range("flat index beyond the space size");
    }
    Point x(space.dims());
    for (std::size_t j = space.dims(); j-- > 0;) {
        const Coord k = space.size(j);
        x[j] = static_cast<Coord>(index % k);
        index /= k;
    }
    return x;
}

SampleSet draw_samples(const ProductDistribution& dist, std::uint64_t m, std::uint64_t seed) {
    const SpaceSpec& space = dist.space();
    const std::size_t n = space.dims();

    // cumulative tables; linear scan is fine at the cardinalities in use
    std::vector<std::vector<double>> cdf(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& marginal = dist.marginal(j);
        cdf[j].resize(marginal.size());
        double running = 0.0;
        for (std::size_t v = 0; v < marginal.size(); ++v) {
            running += marginal.prob(v);
            cdf[j][v] = running;
        }
    }

    SampleSet samples;
    samples.seed = seed;
    samples.points.reserve(m);
    Xoshiro256ss rng(seed);
    for (std::uint64_t i = 0; i < m; ++i) {
        Point x(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double u = rng.uniform01();
            Coord c = 0;
            const Coord last = space.size(j) - 1;
            while (c < last && u >= cdf[j][c]) ++c;
            x[j] = c;
        }
        samples.points.push_back(std::move(x));
    }
    return samples;
}

std::map<Point, std::uint64_t> counts(const SampleSet& samples, const SpaceSpec& space) {
    std::map<Point, std::uint64_t> occurrence;
    for (const Point& p : samples.points) {
        space.require_point(p);
        ++occurrence[p];
    }
    return occurrence;
}

} // namespace distlearn
