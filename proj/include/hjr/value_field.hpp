#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hjr/grid.hpp"

namespace hjr {

/**
 * One finite scalar per grid node, row-major with the last dimension fastest.
 *
 * Sets are represented implicitly as the zero sublevel set {x : value(x) <= 0}.
 * Fields share ownership of their grid, so copies are cheap to hand around
 * and two fields are compatible when their grids compare equal.
 */
class ValueField {
public:
    /// Throws DimensionError on length mismatch, ArgumentError on non-finite entries.
    ValueField(std::shared_ptr<const Grid> grid, std::vector<double> values);

    /// Samples `fn` at every node.
    static ValueField sample(std::shared_ptr<const Grid> grid,
                             const std::function<double(std::span<const double>)>& fn);

    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] double at(std::span<const std::size_t> idx) const {
        return values_[grid_->linear_index(idx)];
    }

    [[nodiscard]] bool same_grid(const ValueField& other) const noexcept {
        return grid_ == other.grid_ || *grid_ == *other.grid_;
    }

    friend bool operator==(const ValueField& a, const ValueField& b) {
        return a.same_grid(b) && a.values_ == b.values_;
    }

private:
    struct Unchecked {};
    ValueField(Unchecked, std::shared_ptr<const Grid> grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {}

    std::shared_ptr<const Grid> grid_;
    std::vector<double> values_;

    friend ValueField make_field_unchecked(std::shared_ptr<const Grid>, std::vector<double>);
};

/// Library-internal constructor for hot paths that have already checked finiteness.
ValueField make_field_unchecked(std::shared_ptr<const Grid> grid, std::vector<double> values);

/// Throws GridMismatchError unless the fields share a grid.
void require_same_grid(const ValueField& a, const ValueField& b, const char* what);

// ── Implicit shapes ──────────────────────────────────────────────────────────

/// ‖x − center‖ − radius.
[[nodiscard]] ValueField shape_sphere(std::shared_ptr<const Grid> grid,
                                      std::span<const double> center, double radius);

/// Sphere over the kept dimensions; constant along every dimension in `ignore_dims`.
/// `center` lists coordinates for the kept dimensions in ascending order.
[[nodiscard]] ValueField shape_cylinder(std::shared_ptr<const Grid> grid,
                                        std::span<const std::size_t> ignore_dims,
                                        std::span<const double> center, double radius);

/// max over i of max(lower[i] − x[i], x[i] − upper[i]).
[[nodiscard]] ValueField shape_rectangle(std::shared_ptr<const Grid> grid,
                                         std::span<const double> lower,
                                         std::span<const double> upper);

// ── Set algebra ──────────────────────────────────────────────────────────────

[[nodiscard]] ValueField field_union(const ValueField& a, const ValueField& b);
[[nodiscard]] ValueField field_intersection(const ValueField& a, const ValueField& b);
[[nodiscard]] ValueField field_complement(const ValueField& a);

// ── Stencils and interpolation ───────────────────────────────────────────────

struct OneSided {
    double left;
    double right;
};

/// Backward and forward differences at one node along `dim`. Periodic
/// dimensions wrap; non-periodic edges use a linearly extrapolated ghost node.
[[nodiscard]] OneSided one_sided_difference(const Grid& grid, std::span<const double> values,
                                            std::size_t linear, std::size_t dim) noexcept;

/// Central difference at one node along `dim`; one-sided at non-periodic edges.
[[nodiscard]] double central_difference(const Grid& grid, std::span<const double> values,
                                        std::size_t linear, std::size_t dim) noexcept;

/// First-order one-sided derivative fields along `dim`.
[[nodiscard]] std::pair<ValueField, ValueField> upwind_first_derivatives(const ValueField& field,
                                                                         std::size_t dim);

/// Corners and weights of the interpolation cell enclosing a query point.
struct InterpolationStencil {
    std::vector<std::size_t> nodes;  // 2^d flat indices
    std::vector<double> weights;     // matching multilinear weights, summing to 1
};

/// Cell corners and weights for multilinear interpolation at `x`.
/// Throws DomainError when a non-periodic coordinate is outside [min, max].
[[nodiscard]] InterpolationStencil interpolation_stencil(const Grid& grid,
                                                         std::span<const double> x);

/// Multilinear interpolation of `field` at `x`; periodic dimensions wrap.
[[nodiscard]] double interpolate(const ValueField& field, std::span<const double> x);

}  // namespace hjr
