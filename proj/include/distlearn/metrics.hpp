#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>
#include <vector>

#include "distlearn/core.hpp"
#include "distlearn/estimators.hpp"
#include "distlearn/numeric.hpp"

namespace distlearn {

// Anything that can report the probability mass of a single point. Both
// ProductDistribution and the dense-on-space view below qualify, so the
// sparse-vs-reference metrics are written once.
template <typename D>
concept PointwiseEvaluable = requires(const D& d, const Point& x) {
    { d.mass(x) } -> std::convertible_to<double>;
};

// Binds a dense pmf over the flattened space to an n-dimensional space so
// it can answer pointwise queries.
struct DenseOnSpace {
    const DenseDistribution* pmf;
    const SpaceSpec* space;

    double mass(const Point& x) const {
        return pmf->prob(flatten_index(x, *space));
    }
};

// Half the L1 distance between two pmfs on the same finite set.
double tv_dense(const DenseDistribution& p, const DenseDistribution& q);

// Exact TV between two product distributions by full mixed-radix
// enumeration. Throws EnumerationError beyond the space's cap.
double tv_product_exact(const ProductDistribution& p, const ProductDistribution& q,
                        const SpaceSpec& space);

// Sum of the marginal TVs; an upper bound on the product TV (subadditivity
// over independent components), usable on spaces too large to enumerate.
double tv_product_upper_bound(const ProductDistribution& p, const ProductDistribution& q);

// TV between two finitely supported distributions via a merge over the
// union of their supports.
double tv_sparse_pair(const SparseDistribution& e, const SparseDistribution& f);

// Exact TV between a finitely supported E and a pointwise-evaluable D
// without enumerating the space:
//   tv = 1/2 * [ sum_{x in supp(E)} |E(x) - D(x)| + (1 - D(supp(E))) ]
// The off-support region contributes exactly its D-mass since E vanishes
// there.
template <PointwiseEvaluable D>
double tv_sparse_vs_pointwise(const SparseDistribution& e, const D& d) {
    NeumaierSum l1_on_support;
    NeumaierSum reference_support_mass;
    const double total = static_cast<double>(e.total());
    for (const auto& [point, count] : e.counts()) {
        const double ex = static_cast<double>(count) / total;
        const double dx = d.mass(point);
        l1_on_support.add(std::abs(ex - dx));
        reference_support_mass.add(dx);
    }
    return 0.5 * (l1_on_support.value() + (1.0 - reference_support_mass.value()));
}

struct WitnessReport {
    // |E(A) - D(A)| for the optimal event A = { x : E(x) > D(x) }
    double advantage = 0.0;
    // the points of supp(E) belonging to A (A never reaches off support,
    // where E vanishes and can only undershoot D)
    std::vector<Point> witness;
    // reference mass left outside supp(E): 1 - D(supp(E))
    double offsupport_mass = 0.0;
};

// Builds the optimal witness event and checks the maximum-advantage
// characterization: the advantage of A must equal the TV distance.
// The identity failing indicates a numeric defect, hence the logic_error.
template <PointwiseEvaluable D>
WitnessReport witness_advantage(const SparseDistribution& e, const D& d) {
    WitnessReport report;
    NeumaierSum advantage;
    NeumaierSum reference_support_mass;
    const double total = static_cast<double>(e.total());
    for (const auto& [point, count] : e.counts()) {
        const double ex = static_cast<double>(count) / total;
        const double dx = d.mass(point);
        reference_support_mass.add(dx);
        if (ex > dx) {
            advantage.add(ex - dx);
            report.witness.push_back(point);
        }
    }
    report.advantage = advantage.value();
    report.offsupport_mass = 1.0 - reference_support_mass.value();

    const double tv = tv_sparse_vs_pointwise(e, d);
    if (std::abs(report.advantage - tv) > 1e-9) {
        throw std::logic_error("witness advantage diverged from the TV distance");
    }
    return report;
}

} // namespace distlearn
