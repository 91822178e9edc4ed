#pragma once

#include <cstdint>
#include <random>

namespace motionsync::detail {

// 53-bit uniform in [0,1); avoids the unspecified std distribution algorithms
// so seeded streams are reproducible everywhere.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

/// Uniform integer in [lo, hi], inclusive.
inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen() % span);
}

}  // namespace motionsync::detail
