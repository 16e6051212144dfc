#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace torsion {

/// Uniform truncated grid on [-L, L] with homogeneous Dirichlet conditions
/// at the endpoints. Only interior nodes x_j = -L + j*h, j = 1..2L/h-1, are
/// stored. Statistics that stand in for whole-space quantities are taken on
/// the measurement window [-W, W] only, keeping the Dirichlet boundary layer
/// out of every sup/inf scan.
struct Grid {
    int dimension = 1;
    double half_width = 0.0; // L
    double spacing = 0.0;    // h
    double window = 0.0;     // W <= L
    std::vector<double> nodes;
    std::size_t window_begin = 0; // first node index with |x| <= W
    std::size_t window_end = 0;   // one past the last such index

    std::size_t size() const { return nodes.size(); }
    double node(std::size_t i) const { return nodes[i]; }
    std::size_t window_size() const { return window_end - window_begin; }
};

/// One cell [lo, lo + side) of an aligned box partition. Member nodes are the
/// grid nodes in the half-open interval; they form a contiguous index range.
struct BoxCell {
    double lo = 0.0;
    std::size_t first_node = 0;
    std::size_t node_count = 0;
};

/// Partition Q_l of the window into cells of side l with corners on l*Z,
/// restricted to cells fully inside [-W, W]. Cells near the window edge that
/// would protrude are dropped, so the union of cells may cover slightly less
/// than the window.
struct BoxPartition {
    const Grid* grid = nullptr;
    double side = 0.0;
    std::vector<BoxCell> cells;
};

inline Grid build_grid(int dimension, double half_width, double spacing, double window) {
    if (dimension != 1)
        throw std::invalid_argument("build_grid: only dimension 1 is supported here; "
                                    "use build_radial_grid for radial 3d problems");
    if (!(spacing > 0.0))
        throw std::invalid_argument("build_grid: spacing must be positive");
    if (!(spacing < 2.0 * half_width))
        throw std::invalid_argument("build_grid: spacing must be smaller than the domain width 2L");
    if (!(window > 0.0) || window > half_width * (1.0 + 1e-12))
        throw std::invalid_argument("build_grid: window must satisfy 0 < W <= L");

    const double ratio = 2.0 * half_width / spacing;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("build_grid: 2L/h must be an integer, got " + std::to_string(ratio));

    const auto intervals = static_cast<std::size_t>(rounded);
    Grid g;
    g.dimension = dimension;
    g.half_width = half_width;
    g.spacing = spacing;
    g.window = window;
    g.nodes.resize(intervals - 1);
    for (std::size_t j = 0; j + 1 < intervals; ++j)
        g.nodes[j] = -half_width + static_cast<double>(j + 1) * spacing;

    const double tol = 1e-9 * spacing;
    std::size_t b = 0;
    while (b < g.nodes.size() && g.nodes[b] < -window - tol) ++b;
    std::size_t e = g.nodes.size();
    while (e > b && g.nodes[e - 1] > window + tol) --e;
    g.window_begin = b;
    g.window_end = e;
    return g;
}

inline BoxPartition box_partition(const Grid& grid, double side) {
    const double h = grid.spacing;
    const double W = grid.window;
    if (side < h * (1.0 - 1e-12))
        throw std::invalid_argument("box_partition: side length below grid spacing risks empty cells");
    if (side > 2.0 * W * (1.0 + 1e-12))
        throw std::invalid_argument("box_partition: side length exceeds the window width");

    BoxPartition part;
    part.grid = &grid;
    part.side = side;

    const double tol = 1e-9 * side;
    const auto k_min = static_cast<long>(std::ceil(-W / side - 1e-9));
    for (long k = k_min;; ++k) {
        const double lo = static_cast<double>(k) * side;
        if (lo < -W - tol) continue;
        if (lo + side > W + tol) break;

        // node index range for [lo, lo + side)
        const double L = grid.half_width;
        double a = (lo + L) / h - 1.0;
        double b = (lo + side + L) / h - 1.0;
        auto i_lo = static_cast<long>(std::ceil(a - 1e-9));
        auto i_end = static_cast<long>(std::ceil(b - 1e-9));
        i_lo = std::max<long>(i_lo, 0);
        i_end = std::min<long>(i_end, static_cast<long>(grid.size()));
        if (i_end <= i_lo) continue; // no member node; skip the cell
        BoxCell cell;
        cell.lo = lo;
        cell.first_node = static_cast<std::size_t>(i_lo);
        cell.node_count = static_cast<std::size_t>(i_end - i_lo);
        part.cells.push_back(cell);
    }
    return part;
}

} // namespace torsion
