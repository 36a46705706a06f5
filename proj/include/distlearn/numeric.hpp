#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace distlearn {

// Neumaier's variant of Kahan summation. TV enumerations can run to ~10^7
// terms while the acceptance tolerances sit at 1e-9, so plain accumulation
// is not good enough.
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Median of a sample; averages the middle pair for even sizes.
// Takes a copy because it needs to reorder.
inline double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

} // namespace distlearn
