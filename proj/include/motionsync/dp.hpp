#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "motionsync/cost_oracle.hpp"
#include "motionsync/warp.hpp"

namespace motionsync {

/// A grid node the optimal path must traverse, up to a Chebyshev tolerance
/// of tolerance_w cells.
struct Anchor {
    int i = 0;
    int j = 0;
    int tolerance_w = 0;
};

struct AlignmentResult {
    FrameCorrespondence path;
    Diffeomorphism warp;
    double total_cost = 0.0;
    std::int64_t cells_visited = 0;  // distinct cost cells evaluated
    double wall_time_ms = 0.0;
    bool fallback_unanchored = false;
};

/// Accumulated-cost landscape for heat-map export; +inf where the solver
/// never reached a cell.
struct DpLandscape {
    int rows = 0;
    int cols = 0;
    std::vector<double> accumulated;
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One dynamic-programming stage between consecutive anchors, restricted to
// the bounding rectangle of their inflated windows.
struct DpStage {
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0;
    std::vector<double> dp;
    std::vector<std::uint8_t> pred;  // 0 start, 1 diag, 2 step in i, 3 step in j, 4 seed

    int width() const { return j1 - j0 + 1; }
    bool contains(int i, int j) const { return i >= i0 && i <= i1 && j >= j0 && j <= j1; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i - i0) * static_cast<std::size_t>(width()) +
               static_cast<std::size_t>(j - j0);
    }
    double at(int i, int j) const { return contains(i, j) ? dp[index(i, j)] : kInf; }
};

// Memoized oracle view; counts distinct cells evaluated.
struct CellCache {
    const CostOracle* oracle;
    int cols;
    std::vector<double> memo;
    std::int64_t distinct = 0;

    CellCache(const CostOracle& c, int n, int m)
        : oracle(&c), cols(m),
          memo(static_cast<std::size_t>(n) * static_cast<std::size_t>(m),
               std::numeric_limits<double>::quiet_NaN()) {}

    double operator()(int i, int j) {
        double& slot = memo[static_cast<std::size_t>(i) * cols + j];
        if (std::isnan(slot)) {
            slot = (*oracle)(i, j);
            if (slot < 0.0 || std::isnan(slot))
                throw std::invalid_argument("cost oracle must return nonnegative values");
            ++distinct;
        }
        return slot;
    }
};

inline AlignmentResult solve_dp(const CostOracle& cost, int n, int m,
                                const std::vector<Anchor>& anchors, DpLandscape* landscape) {
    const auto started = std::chrono::steady_clock::now();

    // anchor chain with implicit zero-tolerance endpoints
    std::vector<Anchor> chain;
    chain.push_back({0, 0, 0});
    for (const Anchor& a : anchors) {
        if (a.i < 0 || a.i >= n || a.j < 0 || a.j >= m)
            throw std::invalid_argument("anchor out of grid range");
        if (a.tolerance_w < 0) throw std::invalid_argument("anchor tolerance must be >= 0");
        if ((a.i == 0 && a.j == 0) || (a.i == n - 1 && a.j == m - 1)) continue;
        if (!chain.empty() && chain.size() > 1) {
            const Anchor& prev = chain.back();
            if (!(a.i > prev.i && a.j > prev.j))
                throw std::invalid_argument("infeasible anchor chain: not strictly monotone");
        }
        chain.push_back(a);
    }
    chain.push_back({n - 1, m - 1, 0});

    CellCache cell(cost, n, m);
    const auto window_contains = [&](const Anchor& a, int i, int j) {
        return std::abs(i - a.i) <= a.tolerance_w && std::abs(j - a.j) <= a.tolerance_w;
    };

    std::vector<DpStage> stages(chain.size() - 1);
    for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
        const Anchor& a = chain[s];
        const Anchor& b = chain[s + 1];
        DpStage& stage = stages[s];
        stage.i0 = std::max(0, a.i - a.tolerance_w);
        stage.i1 = std::min(n - 1, b.i + b.tolerance_w);
        stage.j0 = std::max(0, a.j - a.tolerance_w);
        stage.j1 = std::min(m - 1, b.j + b.tolerance_w);
        const std::size_t cells = static_cast<std::size_t>(stage.i1 - stage.i0 + 1) *
                                  static_cast<std::size_t>(stage.width());
        stage.dp.assign(cells, kInf);
        stage.pred.assign(cells, 0);

        for (int i = stage.i0; i <= stage.i1; ++i) {
            for (int j = stage.j0; j <= stage.j1; ++j) {
                double best = kInf;
                std::uint8_t op = 0;
                if (window_contains(a, i, j)) {
                    // a path may satisfy this anchor right here and carry on
                    if (s == 0) {
                        if (i == 0 && j == 0) {
                            best = cell(0, 0);
                            op = 0;
                        }
                    } else {
                        const double seed = stages[s - 1].at(i, j);
                        if (seed < best) {
                            best = seed;
                            op = 4;
                        }
                    }
                }
                const double local = cell(i, j);
                const double diag = stage.at(i - 1, j - 1);
                if (local + diag < best) {
                    best = local + diag;
                    op = 1;
                }
                const double up = stage.at(i - 1, j);
                if (local + up < best) {
                    best = local + up;
                    op = 2;
                }
                const double left = stage.at(i, j - 1);
                if (local + left < best) {
                    best = local + left;
                    op = 3;
                }
                stage.dp[stage.index(i, j)] = best;
                stage.pred[stage.index(i, j)] = op;
            }
        }
    }

    const double total = stages.back().at(n - 1, m - 1);
    if (!(total < kInf))
        throw std::invalid_argument("infeasible anchor chain: no monotone path");

    // walk predecessors backwards through the stages
    std::vector<std::array<int, 2>> reversed;
    int i = n - 1, j = m - 1;
    std::size_t s = stages.size() - 1;
    reversed.push_back({i, j});
    for (;;) {
        const std::uint8_t op = stages[s].pred[stages[s].index(i, j)];
        if (op == 0) break;
        if (op == 4) {
            --s;
            continue;  // same cell, previous stage
        }
        if (op == 1) {
            --i;
            --j;
        } else if (op == 2) {
            --i;
        } else {
            --j;
        }
        reversed.push_back({i, j});
    }

    AlignmentResult result;
    result.path.pairs.assign(reversed.rbegin(), reversed.rend());
    result.warp = warp_from_path(result.path, n, m);
    result.total_cost = total;
    result.cells_visited = cell.distinct;

    if (landscape) {
        landscape->rows = n;
        landscape->cols = m;
        landscape->accumulated.assign(static_cast<std::size_t>(n) * m, kInf);
        for (const DpStage& stage : stages)
            for (int si = stage.i0; si <= stage.i1; ++si)
                for (int sj = stage.j0; sj <= stage.j1; ++sj) {
                    double& slot = landscape->accumulated[static_cast<std::size_t>(si) * m + sj];
                    slot = std::min(slot, stage.dp[stage.index(si, sj)]);
                }
    }

    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return result;
}

}  // namespace detail

/// Classical dynamic time warping: minimal-cost monotone path from (0,0) to
/// (N-1,M-1) over steps {(1,0),(0,1),(1,1)}, endpoint cells included in the
/// total. Ties prefer the diagonal step, then the step in i. Visits all N*M
/// cells.
inline AlignmentResult dtw(const CostOracle& cost, int n, int m, DpLandscape* landscape = nullptr) {
    if (n < 2 || m < 2) throw std::invalid_argument("dtw needs grids of at least 2x2");
    return detail::solve_dp(cost, n, m, {}, landscape);
}

/// Anchored variant: the path must pass within each anchor's Chebyshev
/// window, and only cells inside the bounding rectangles between consecutive
/// inflated anchors are ever evaluated. Throws on a non-monotone anchor
/// chain.
inline AlignmentResult anchored_dtw(const CostOracle& cost, int n, int m,
                                    const std::vector<Anchor>& anchors,
                                    DpLandscape* landscape = nullptr) {
    if (n < 2 || m < 2) throw std::invalid_argument("anchored_dtw needs grids of at least 2x2");
    return detail::solve_dp(cost, n, m, anchors, landscape);
}

}  // namespace motionsync
