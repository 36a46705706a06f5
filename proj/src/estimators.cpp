#include "distlearn/estimators.hpp"

#include <string>

namespace distlearn {

SparseDistribution::SparseDistribution(SpaceSpec space, std::map<Point, std::uint64_t> atom_counts)
    : space_(std::move(space)), counts_(std::move(atom_counts)) {
    for (const auto& [point, count] : counts_) {
        space_.require_point(point);
        if (count == 0) {
            throw std::invalid_argument("sparse atoms must have positive count");
        }
        total_ += count;
    }
    if (total_ == 0) {
        throw EmptySampleError("sparse distribution needs at least one sample");
    }
}

double SparseDistribution::mass(const Point& x) const {
    space_.require_point(x);
    const auto it = counts_.find(x);
    if (it == counts_.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total_);
}

SparseDistribution empirical_distribution(const SampleSet& samples, const SpaceSpec& space) {
    if (samples.size() == 0) {
        throw EmptySampleError("empirical distribution needs at least one sample");
    }
    return {space, counts(samples, space)};
}

ProductDistribution product_empirical_distribution(const SampleSet& samples,
                                                   const SpaceSpec& space) {
    const std::uint64_t m = samples.size();
    if (m == 0) {
        throw EmptySampleError("product empirical distribution needs at least one sample");
    }

    std::vector<std::vector<std::uint64_t>> coordinate_counts(space.dims());
    for (std::size_t j = 0; j < space.dims(); ++j) {
        coordinate_counts[j].assign(space.size(j), 0);
    }
    for (const Point& p : samples.points) {
        space.require_point(p);
        for (std::size_t j = 0; j < space.dims(); ++j) {
            ++coordinate_counts[j][p[j]];
        }
    }

    std::vector<DenseDistribution> marginals;
    marginals.reserve(space.dims());
    for (std::size_t j = 0; j < space.dims(); ++j) {
        std::vector<double> freq(space.size(j));
        for (std::size_t v = 0; v < freq.size(); ++v) {
            freq[v] = static_cast<double>(coordinate_counts[j][v]) / static_cast<double>(m);
        }
        marginals.emplace_back(std::move(freq));
    }
    return {space, std::move(marginals)};
}

} // namespace distlearn
