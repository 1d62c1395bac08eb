#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hjr/value_field.hpp"

namespace hjr {

/// A 2-D cut through a grid: two free dimensions, every other one pinned.
struct SliceSpec {
    std::array<std::size_t, 2> free_dims{0, 1};
    /// Coordinates of the pinned dimensions, in ascending dimension order.
    std::vector<double> fixed;

    friend bool operator==(const SliceSpec&, const SliceSpec&) = default;
};

/// Throws ArgumentError unless the slice is well-formed for `grid`.
void validate_slice(const Grid& grid, const SliceSpec& slice);

/// Polyline vertices in (free_dims[0], free_dims[1]) coordinates. Closed
/// loops repeat their first vertex at the end.
using Polyline = std::vector<std::array<double, 2>>;

/**
 * Marching squares on the slice lattice at `level`.
 *
 * Nodes of the slice are the grid nodes of the free dimensions; pinned
 * coordinates are multilinearly interpolated. Crossings are placed by linear
 * interpolation along cell edges, and saddle cells are split according to
 * the sign of the mean of their four corners. Periodic free dimensions
 * include the wrap-around cell; polylines are broken at the seam.
 */
[[nodiscard]] std::vector<Polyline> extract_contours(const ValueField& field,
                                                     const SliceSpec& slice, double level);

}  // namespace hjr
