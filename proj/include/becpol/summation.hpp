#pragma once

#include <cmath>

namespace becpol {

// Neumaier compensated accumulator. Merging two accumulators is itself
// compensated, so a fixed merge order gives results independent of how
// the work was split.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    void merge(const NeumaierSum& o) {
        add(o.sum);
        add(o.comp);
    }
    double value() const { return sum + comp; }
};

}  // namespace becpol
