#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "motionsync/detail/rng.hpp"

namespace motionsync {

/// Slope given to flattened runs when a lattice path is turned into a
/// strictly increasing graph.
inline constexpr double kPlateauSlope = 1e-6;

/// Orientation-preserving piecewise-linear bijection of [0,1] fixing the
/// endpoints, stored as strictly increasing knot/value lists.
class Diffeomorphism {
public:
    Diffeomorphism() = default;

    Diffeomorphism(std::vector<double> knots, std::vector<double> values)
        : knots_(std::move(knots)), values_(std::move(values)) {
        if (knots_.size() != values_.size() || knots_.size() < 2)
            throw std::invalid_argument("warp needs matching knot/value lists of size >= 2");
        if (knots_.front() != 0.0 || knots_.back() != 1.0 ||
            values_.front() != 0.0 || values_.back() != 1.0)
            throw std::invalid_argument("warp must map 0 to 0 and 1 to 1");
        for (std::size_t i = 1; i < knots_.size(); ++i) {
            if (!(knots_[i] > knots_[i - 1]) || !(values_[i] > values_[i - 1]))
                throw std::invalid_argument("warp must be strictly increasing");
        }
    }

    static Diffeomorphism identity() { return Diffeomorphism(); }

    /// Piecewise-linear evaluation; arguments are clamped to [0,1].
    double operator()(double t) const {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        const auto hi = static_cast<std::size_t>(it - knots_.begin());
        const auto lo = hi - 1;
        const double w = (t - knots_[lo]) / (knots_[hi] - knots_[lo]);
        return values_[lo] + w * (values_[hi] - values_[lo]);
    }

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const Diffeomorphism&, const Diffeomorphism&) = default;

private:
    std::vector<double> knots_{0.0, 1.0};
    std::vector<double> values_{0.0, 1.0};
};

/// Monotone lattice path pairing frame indices of two motions. Starts at
/// (0,0), ends at (K1-1,K2-1), steps in {(1,0),(0,1),(1,1)}; a frame may
/// appear in several pairs.
struct FrameCorrespondence {
    std::vector<std::array<int, 2>> pairs;
};

inline void validate_path(const FrameCorrespondence& p, int frames1, int frames2) {
    if (frames1 < 2 || frames2 < 2)
        throw std::invalid_argument("correspondence needs at least 2 frames per motion");
    if (p.pairs.empty() || p.pairs.front() != std::array<int, 2>{0, 0} ||
        p.pairs.back() != std::array<int, 2>{frames1 - 1, frames2 - 1})
        throw std::invalid_argument("correspondence must run from (0,0) to (K1-1,K2-1)");
    for (std::size_t k = 1; k < p.pairs.size(); ++k) {
        const int di = p.pairs[k][0] - p.pairs[k - 1][0];
        const int dj = p.pairs[k][1] - p.pairs[k - 1][1];
        const bool ok = (di == 1 && dj == 0) || (di == 0 && dj == 1) || (di == 1 && dj == 1);
        if (!ok) throw std::invalid_argument("correspondence steps must be (1,0), (0,1) or (1,1)");
    }
}

namespace detail {

// Drop points that fail strict monotonicity after floating-point merges and
// force the terminal vertex to land exactly on (1,1).
inline void enforce_strict(std::vector<double>& xs, std::vector<double>& ys) {
    std::size_t out = 1;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] > xs[out - 1] && ys[i] > ys[out - 1]) {
            xs[out] = xs[i];
            ys[out] = ys[i];
            ++out;
        }
    }
    xs.resize(out);
    ys.resize(out);
    if (xs.back() != 1.0 || ys.back() != 1.0) {
        while (xs.size() > 1 && (xs.back() >= 1.0 || ys.back() >= 1.0)) {
            xs.pop_back();
            ys.pop_back();
        }
        xs.push_back(1.0);
        ys.push_back(1.0);
    }
}

inline std::vector<double> merge_knots(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

inline Diffeomorphism invert(const Diffeomorphism& phi) {
    return Diffeomorphism(phi.values(), phi.knots());
}

/// Exact piecewise-linear representation of phi∘psi. Breakpoints are psi's
/// knots plus the pullback of phi's knots through psi.
inline Diffeomorphism compose(const Diffeomorphism& phi, const Diffeomorphism& psi) {
    const Diffeomorphism psi_inv = invert(psi);
    std::vector<double> knots = psi.knots();
    knots.reserve(knots.size() + phi.knots().size());
    for (double k : phi.knots()) knots.push_back(psi_inv(k));
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> values(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) values[i] = phi(psi(knots[i]));
    detail::enforce_strict(knots, values);
    return Diffeomorphism(std::move(knots), std::move(values));
}

/// Seeded generator over positive step densities: the density is integrated
/// and normalized, which lands in Diff+([0,1]) by construction.
struct DiffeoSpec {
    std::uint64_t seed = 0;
    int n_basis = 8;
    double max_slope_ratio = 4.0;  // bound on sup phi' / inf phi'
};

inline Diffeomorphism random_diffeo(const DiffeoSpec& spec) {
    if (spec.n_basis < 1) throw std::invalid_argument("n_basis must be >= 1");
    if (!(spec.max_slope_ratio > 1.0)) throw std::invalid_argument("max_slope_ratio must exceed 1");
    std::mt19937_64 gen(spec.seed);
    std::vector<double> density(static_cast<std::size_t>(spec.n_basis));
    for (auto& w : density) w = detail::uniform_in(gen, 1.0, spec.max_slope_ratio);
    double total = 0.0;
    for (double w : density) total += w;

    const auto n = static_cast<std::size_t>(spec.n_basis);
    std::vector<double> knots(n + 1), values(n + 1);
    double acc = 0.0;
    knots[0] = 0.0;
    values[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        acc += density[i - 1];
        knots[i] = static_cast<double>(i) / static_cast<double>(n);
        values[i] = acc / total;
    }
    knots[n] = 1.0;
    values[n] = 1.0;
    return Diffeomorphism(std::move(knots), std::move(values));
}

enum class CombineMethod { weighted_mean, median };

/// Pointwise weighted mean or median on the union of all knot grids.
/// Monotone maps are closed under both, so the result is a valid warp.
/// Weights must sum to 1 (within 1e-9); they are ignored for the median.
inline Diffeomorphism combine_warps(const std::vector<Diffeomorphism>& warps,
                                    const std::vector<double>& weights,
                                    CombineMethod method) {
    if (warps.empty()) throw std::invalid_argument("combine_warps needs at least one warp");
    double weight_sum = 1.0;
    if (method == CombineMethod::weighted_mean) {
        if (weights.size() != warps.size())
            throw std::invalid_argument("one weight per warp required");
        weight_sum = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("weights must be nonnegative");
            weight_sum += w;
        }
        if (std::abs(weight_sum - 1.0) > 1e-9)
            throw std::invalid_argument("weights must sum to 1");
    }

    std::vector<double> grid = warps[0].knots();
    for (std::size_t k = 1; k < warps.size(); ++k)
        grid = detail::merge_knots(grid, warps[k].knots());

    std::vector<double> values(grid.size());
    std::vector<double> samples(warps.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (std::size_t k = 0; k < warps.size(); ++k) samples[k] = warps[k](grid[g]);
        if (method == CombineMethod::weighted_mean) {
            double v = 0.0;
            for (std::size_t k = 0; k < warps.size(); ++k) v += weights[k] * samples[k];
            values[g] = v / weight_sum;
        } else {
            std::sort(samples.begin(), samples.end());
            const std::size_t n = samples.size();
            values[g] = (n % 2 == 1) ? samples[n / 2]
                                     : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
        }
    }
    values.front() = 0.0;
    values.back() = 1.0;
    detail::enforce_strict(grid, values);
    return Diffeomorphism(std::move(grid), std::move(values));
}

/// Mean L1 gap as a percentage of the unit square:
/// 100 * integral of |phi - psi| over [0,1], exact on the merged knot grid.
inline double l1_distance(const Diffeomorphism& phi, const Diffeomorphism& psi) {
    const std::vector<double> grid = detail::merge_knots(phi.knots(), psi.knots());
    double total = 0.0;
    double x_prev = grid.front();
    double d_prev = phi(x_prev) - psi(x_prev);
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const double x = grid[g];
        const double d = phi(x) - psi(x);
        const double h = x - x_prev;
        if (d_prev * d >= 0.0) {
            total += 0.5 * std::abs(d_prev + d) * h;
        } else {
            const double c = d_prev / (d_prev - d);  // zero crossing fraction
            total += 0.5 * (std::abs(d_prev) * c + std::abs(d) * (1.0 - c)) * h;
        }
        x_prev = x;
        d_prev = d;
    }
    return 100.0 * total;
}

/// Builds a warp through weakly monotone graph points. Horizontal runs are
/// tilted to slope `plateau_slope` and vertical runs to its reciprocal,
/// spread over the run's extent, so the result is strictly increasing.
/// (0,0)/(1,1) are prepended/appended when missing.
inline Diffeomorphism regularized_warp_through(std::vector<double> xs, std::vector<double> ys,
                                               double plateau_slope = kPlateauSlope) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("point lists must be nonempty and of equal size");

    // compact exact duplicates, check weak monotonicity and range
    std::size_t out = 1;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] == xs[out - 1] && ys[i] == ys[out - 1]) continue;
        if (xs[i] < xs[out - 1] || ys[i] < ys[out - 1])
            throw std::invalid_argument("graph points must be monotone");
        xs[out] = xs[i];
        ys[out] = ys[i];
        ++out;
    }
    xs.resize(out);
    ys.resize(out);
    if (xs.front() < 0.0 || ys.front() < 0.0 || xs.back() > 1.0 || ys.back() > 1.0)
        throw std::invalid_argument("graph points must lie in the unit square");
    if (xs.front() != 0.0 || ys.front() != 0.0) {
        xs.insert(xs.begin(), 0.0);
        ys.insert(ys.begin(), 0.0);
    }
    if (xs.back() != 1.0 || ys.back() != 1.0) {
        xs.push_back(1.0);
        ys.push_back(1.0);
    }

    const std::size_t P = xs.size();
    if (P < 2) throw std::invalid_argument("need at least two distinct points");

    // tilt horizontal runs (constant y over an x interval)
    for (std::size_t a = 0; a + 1 < P;) {
        if (ys[a + 1] != ys[a]) {
            ++a;
            continue;
        }
        std::size_t b = a;
        while (b + 1 < P && ys[b + 1] == ys[a]) ++b;
        if (a == 0 && b == P - 1)
            throw std::invalid_argument("degenerate path: constant along an entire axis");
        const double y0 = ys[a];
        if (a == 0) {
            for (std::size_t p = a; p <= b; ++p) ys[p] = y0 + plateau_slope * (xs[p] - xs[a]);
        } else if (b == P - 1) {
            for (std::size_t p = a; p <= b; ++p) ys[p] = y0 - plateau_slope * (xs[b] - xs[p]);
        } else {
            const double mid = 0.5 * (xs[a] + xs[b]);
            for (std::size_t p = a; p <= b; ++p) ys[p] = y0 + plateau_slope * (xs[p] - mid);
        }
        a = b + 1;
    }
    // tilt vertical runs (constant x over a y interval)
    for (std::size_t a = 0; a + 1 < P;) {
        if (xs[a + 1] != xs[a]) {
            ++a;
            continue;
        }
        std::size_t b = a;
        while (b + 1 < P && xs[b + 1] == xs[a]) ++b;
        if (a == 0 && b == P - 1)
            throw std::invalid_argument("degenerate path: constant along an entire axis");
        const double x0 = xs[a];
        if (a == 0) {
            for (std::size_t p = a; p <= b; ++p) xs[p] = x0 + plateau_slope * (ys[p] - ys[a]);
        } else if (b == P - 1) {
            for (std::size_t p = a; p <= b; ++p) xs[p] = x0 - plateau_slope * (ys[b] - ys[p]);
        } else {
            const double mid = 0.5 * (ys[a] + ys[b]);
            for (std::size_t p = a; p <= b; ++p) xs[p] = x0 + plateau_slope * (ys[p] - mid);
        }
        a = b + 1;
    }
    return Diffeomorphism(std::move(xs), std::move(ys));
}

/// Warp through the normalized path vertices, plateau-regularized so the
/// result is a strict diffeomorphism.
inline Diffeomorphism warp_from_path(const FrameCorrespondence& p, int frames1, int frames2) {
    validate_path(p, frames1, frames2);
    std::vector<double> xs(p.pairs.size()), ys(p.pairs.size());
    for (std::size_t k = 0; k < p.pairs.size(); ++k) {
        xs[k] = static_cast<double>(p.pairs[k][0]) / (frames1 - 1);
        ys[k] = static_cast<double>(p.pairs[k][1]) / (frames2 - 1);
    }
    return regularized_warp_through(std::move(xs), std::move(ys));
}

/// Samples the warp on motion 1's frame grid, rounds into motion 2's grid
/// and completes the result to a connected monotone lattice path.
inline FrameCorrespondence path_from_warp(const Diffeomorphism& phi, int frames1, int frames2) {
    if (frames1 < 2 || frames2 < 2)
        throw std::invalid_argument("correspondence needs at least 2 frames per motion");
    FrameCorrespondence out;
    out.pairs.push_back({0, 0});
    int j_prev = 0;
    for (int i = 1; i < frames1; ++i) {
        const double t = static_cast<double>(i) / (frames1 - 1);
        int j = static_cast<int>(std::lround(phi(t) * (frames2 - 1)));
        j = std::clamp(j, j_prev, frames2 - 1);
        for (int jj = j_prev + 1; jj < j; ++jj) out.pairs.push_back({i - 1, jj});
        out.pairs.push_back({i, j});
        j_prev = j;
    }
    for (int jj = j_prev + 1; jj < frames2; ++jj) out.pairs.push_back({frames1 - 1, jj});
    return out;
}

}  // namespace motionsync
