#include "distlearn/metrics.hpp"

#include <string>

namespace distlearn {

double tv_dense(const DenseDistribution& p, const DenseDistribution& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("support sizes differ: " + std::to_string(p.size()) +
                                    " vs " + std::to_string(q.size()));
    }
    NeumaierSum l1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        l1.add(std::abs(p.prob(i) - q.prob(i)));
    }
    return 0.5 * l1.value();
}

namespace {

void require_same_shape(const ProductDistribution& d, const SpaceSpec& space) {
    if (d.dims() != space.dims()) {
        throw std::invalid_argument("product distribution dimension mismatch");
    }
    for (std::size_t j = 0; j < space.dims(); ++j) {
        if (d.marginal(j).size() != space.size(j)) {
            throw std::invalid_argument("marginal cardinality mismatch at dimension " +
                                        std::to_string(j));
        }
    }
}

// depth-first over dimensions carrying both running products; k^n leaves,
// O(k^n) multiplications in total
void accumulate_l1(const ProductDistribution& p, const ProductDistribution& q,
                   const SpaceSpec& space, std::size_t dim, double pp, double pq,
                   NeumaierSum& l1) {
    if (dim == space.dims()) {
        l1.add(std::abs(pp - pq));
        return;
    }
    for (Coord v = 0; v < space.size(dim); ++v) {
        accumulate_l1(p, q, space, dim + 1, pp * p.marginal(dim).prob(v),
                      pq * q.marginal(dim).prob(v), l1);
    }
}

} // namespace

double tv_product_exact(const ProductDistribution& p, const ProductDistribution& q,
                        const SpaceSpec& space) {
    require_same_shape(p, space);
    require_same_shape(q, space);
    if (!space.enumerable()) {
        throw EnumerationError("exact product TV needs an enumerable space");
    }
    NeumaierSum l1;
    accumulate_l1(p, q, space, 0, 1.0, 1.0, l1);
    return 0.5 * l1.value();
}

double tv_product_upper_bound(const ProductDistribution& p, const ProductDistribution& q) {
    if (p.dims() != q.dims()) {
        throw std::invalid_argument("product distributions have different dimension");
    }
    NeumaierSum bound;
    for (std::size_t j = 0; j < p.dims(); ++j) {
        bound.add(tv_dense(p.marginal(j), q.marginal(j)));
    }
    return bound.value();
}

double tv_sparse_pair(const SparseDistribution& e, const SparseDistribution& f) {
    if (e.space().sizes() != f.space().sizes()) {
        throw std::invalid_argument("sparse distributions live on different spaces");
    }
    const double te = static_cast<double>(e.total());
    const double tf = static_cast<double>(f.total());
    NeumaierSum l1;
    auto ie = e.counts().begin();
    auto jf = f.counts().begin();
    while (ie != e.counts().end() || jf != f.counts().end()) {
        if (jf == f.counts().end() || (ie != e.counts().end() && ie->first < jf->first)) {
            l1.add(static_cast<double>(ie->second) / te);
            ++ie;
        } else if (ie == e.counts().end() || jf->first < ie->first) {
            l1.add(static_cast<double>(jf->second) / tf);
            ++jf;
        } else {
            l1.add(std::abs(static_cast<double>(ie->second) / te -
                            static_cast<double>(jf->second) / tf));
            ++ie;
            ++jf;
        }
    }
    return 0.5 * l1.value();
}

} // namespace distlearn
