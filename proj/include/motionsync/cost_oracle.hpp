#pragma once

#include <cstdint>
#include <functional>

namespace motionsync {

/// Velocities below this are treated as zero.
inline constexpr double kEpsVelocity = 1e-8;

/// Method-specific local cost over index pairs of two feature sequences,
/// feeding the alignment engine. Evaluations are counted so complexity
/// claims stay observable.
struct CostOracle {
    int rows = 0;
    int cols = 0;
    std::function<double(int, int)> fn;
    mutable std::int64_t evaluations = 0;

    double operator()(int i, int j) const {
        ++evaluations;
        return fn(i, j);
    }
};

}  // namespace motionsync
