#pragma once

#include <cmath>

namespace favardlab {

// Neumaier compensated accumulator. Summation order still matters for
// bit-exact reproducibility; callers accumulate in a fixed order.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

}  // namespace favardlab
