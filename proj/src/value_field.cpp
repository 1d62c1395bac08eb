#include "hjr/value_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hjr/error.hpp"

namespace hjr {

namespace {

// Query points closer than this to a node (in units of spacing) are snapped onto it,
// so that interpolating at a node returns the stored value exactly.
constexpr double kSnapTolerance = 1e-10;

void require_finite(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ArgumentError("non-finite field value at node " + std::to_string(i));
        }
    }
}

void require_positive_radius(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ArgumentError("radius must be positive");
    }
}

}  // namespace

ValueField::ValueField(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) {
        throw ArgumentError("field requires a grid");
    }
    if (values_.size() != grid_->size()) {
        throw DimensionError("field has " + std::to_string(values_.size()) +
                             " values but the grid has " + std::to_string(grid_->size()) +
                             " nodes");
    }
    require_finite(values_);
}

ValueField ValueField::sample(std::shared_ptr<const Grid> grid,
                              const std::function<double(std::span<const double>)>& fn) {
    if (!grid) {
        throw ArgumentError("field requires a grid");
    }
    std::vector<double> values(grid->size());
    State x(grid->dims());
    for (std::size_t i = 0; i < values.size(); ++i) {
        grid->state_at_linear(i, x);
        values[i] = fn(x);
    }
    return ValueField(std::move(grid), std::move(values));
}

ValueField make_field_unchecked(std::shared_ptr<const Grid> grid, std::vector<double> values) {
    return ValueField(ValueField::Unchecked{}, std::move(grid), std::move(values));
}

void require_same_grid(const ValueField& a, const ValueField& b, const char* what) {
    if (!a.same_grid(b)) {
        throw GridMismatchError(std::string(what) + ": fields are defined on different grids");
    }
}

ValueField shape_sphere(std::shared_ptr<const Grid> grid, std::span<const double> center,
                        double radius) {
    if (!grid) {
        throw ArgumentError("shape requires a grid");
    }
    if (center.size() != grid->dims()) {
        throw DimensionError("sphere center length does not match grid dimension");
    }
    require_positive_radius(radius);
    const std::vector<double> c(center.begin(), center.end());
    return ValueField::sample(std::move(grid), [&](std::span<const double> x) {
        double sq = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double diff = x[d] - c[d];
            sq += diff * diff;
        }
        return std::sqrt(sq) - radius;
    });
}

ValueField shape_cylinder(std::shared_ptr<const Grid> grid, std::span<const std::size_t> ignore_dims,
                          std::span<const double> center, double radius) {
    if (!grid) {
        throw ArgumentError("shape requires a grid");
    }
    std::vector<bool> ignored(grid->dims(), false);
    for (const std::size_t d : ignore_dims) {
        if (d >= grid->dims()) {
            throw ArgumentError("cylinder ignore dimension " + std::to_string(d) + " out of range");
        }
        if (ignored[d]) {
            throw ArgumentError("cylinder ignore dimension " + std::to_string(d) + " repeated");
        }
        ignored[d] = true;
    }
    std::vector<std::size_t> kept;
    for (std::size_t d = 0; d < grid->dims(); ++d) {
        if (!ignored[d]) {
            kept.push_back(d);
        }
    }
    if (kept.empty()) {
        throw ArgumentError("cylinder must keep at least one dimension");
    }
    if (center.size() != kept.size()) {
        throw DimensionError("cylinder center length does not match the kept dimensions");
    }
    require_positive_radius(radius);
    const std::vector<double> c(center.begin(), center.end());
    return ValueField::sample(std::move(grid), [&](std::span<const double> x) {
        double sq = 0.0;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            const double diff = x[kept[j]] - c[j];
            sq += diff * diff;
        }
        return std::sqrt(sq) - radius;
    });
}

ValueField shape_rectangle(std::shared_ptr<const Grid> grid, std::span<const double> lower,
                           std::span<const double> upper) {
    if (!grid) {
        throw ArgumentError("shape requires a grid");
    }
    if (lower.size() != grid->dims() || upper.size() != grid->dims()) {
        throw DimensionError("rectangle bounds length does not match grid dimension");
    }
    for (std::size_t d = 0; d < lower.size(); ++d) {
        if (!(lower[d] < upper[d])) {
            throw ArgumentError("rectangle is empty in dimension " + std::to_string(d));
        }
    }
    const std::vector<double> lo(lower.begin(), lower.end());
    const std::vector<double> hi(upper.begin(), upper.end());
    return ValueField::sample(std::move(grid), [&](std::span<const double> x) {
        double v = -std::numeric_limits<double>::infinity();
        for (std::size_t d = 0; d < x.size(); ++d) {
            v = std::max({v, lo[d] - x[d], x[d] - hi[d]});
        }
        return v;
    });
}

ValueField field_union(const ValueField& a, const ValueField& b) {
    require_same_grid(a, b, "field_union");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::min(a[i], b[i]);
    }
    return make_field_unchecked(a.grid_ptr(), std::move(out));
}

ValueField field_intersection(const ValueField& a, const ValueField& b) {
    require_same_grid(a, b, "field_intersection");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::max(a[i], b[i]);
    }
    return make_field_unchecked(a.grid_ptr(), std::move(out));
}

ValueField field_complement(const ValueField& a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = -a[i];
    }
    return make_field_unchecked(a.grid_ptr(), std::move(out));
}

OneSided one_sided_difference(const Grid& grid, std::span<const double> values, std::size_t linear,
                              std::size_t dim) noexcept {
    const std::size_t n = grid.count(dim);
    const std::size_t stride = grid.stride(dim);
    const std::size_t k = grid.index_along(linear, dim);
    const double h = grid.spacing(dim);
    const double here = values[linear];

    double below;
    double above;
    if (grid.periodic(dim)) {
        below = values[k == 0 ? linear + (n - 1) * stride : linear - stride];
        above = values[k == n - 1 ? linear - (n - 1) * stride : linear + stride];
    } else {
        // Ghost nodes by linear extrapolation: V[-1] = 2V[0] - V[1], V[n] = 2V[n-1] - V[n-2].
        above = k == n - 1 ? 2.0 * here - values[linear - stride] : values[linear + stride];
        below = k == 0 ? 2.0 * here - values[linear + stride] : values[linear - stride];
    }
    return {(here - below) / h, (above - here) / h};
}

double central_difference(const Grid& grid, std::span<const double> values, std::size_t linear,
                          std::size_t dim) noexcept {
    const std::size_t n = grid.count(dim);
    const std::size_t stride = grid.stride(dim);
    const std::size_t k = grid.index_along(linear, dim);
    const double h = grid.spacing(dim);
    if (grid.periodic(dim)) {
        const double below = values[k == 0 ? linear + (n - 1) * stride : linear - stride];
        const double above = values[k == n - 1 ? linear - (n - 1) * stride : linear + stride];
        return (above - below) / (2.0 * h);
    }
    if (k == 0) {
        return (values[linear + stride] - values[linear]) / h;
    }
    if (k == n - 1) {
        return (values[linear] - values[linear - stride]) / h;
    }
    return (values[linear + stride] - values[linear - stride]) / (2.0 * h);
}

std::pair<ValueField, ValueField> upwind_first_derivatives(const ValueField& field,
                                                           std::size_t dim) {
    const Grid& grid = field.grid();
    if (dim >= grid.dims()) {
        throw ArgumentError("derivative dimension " + std::to_string(dim) + " out of range");
    }
    std::vector<double> left(field.size());
    std::vector<double> right(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const OneSided d = one_sided_difference(grid, field.values(), i, dim);
        left[i] = d.left;
        right[i] = d.right;
    }
    return {ValueField(field.grid_ptr(), std::move(left)),
            ValueField(field.grid_ptr(), std::move(right))};
}

InterpolationStencil interpolation_stencil(const Grid& grid, std::span<const double> x) {
    const std::size_t dims = grid.dims();
    if (x.size() != dims) {
        throw DimensionError("query point length does not match grid dimension");
    }
    std::vector<std::size_t> lo(dims);
    std::vector<std::size_t> hi(dims);
    std::vector<double> frac(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        if (!std::isfinite(x[d])) {
            throw DomainError("query coordinate " + std::to_string(d) + " is not finite");
        }
        const std::size_t n = grid.count(d);
        double s = (grid.wrap(d, x[d]) - grid.min(d)) / grid.spacing(d);
        const double nearest = std::round(s);
        if (std::abs(s - nearest) <= kSnapTolerance) {
            s = nearest;
        }
        if (grid.periodic(d)) {
            auto i0 = static_cast<std::size_t>(std::floor(s));
            if (i0 >= n) {
                i0 = 0;
                s = 0.0;
            }
            lo[d] = i0;
            hi[d] = (i0 + 1) % n;
            frac[d] = s - static_cast<double>(i0);
        } else {
            const auto top = static_cast<double>(n - 1);
            if (s < 0.0 || s > top) {
                throw DomainError("query coordinate " + std::to_string(x[d]) +
                                  " outside grid bounds in dimension " + std::to_string(d));
            }
            const auto i0 = std::min(static_cast<std::size_t>(std::floor(s)), n - 2);
            lo[d] = i0;
            hi[d] = i0 + 1;
            frac[d] = s - static_cast<double>(i0);
        }
    }

    const std::size_t corners = std::size_t{1} << dims;
    InterpolationStencil st;
    st.nodes.resize(corners);
    st.weights.resize(corners);
    for (std::size_t c = 0; c < corners; ++c) {
        std::size_t linear = 0;
        double w = 1.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const bool upper = (c >> d) & 1U;
            linear += (upper ? hi[d] : lo[d]) * grid.stride(d);
            w *= upper ? frac[d] : 1.0 - frac[d];
        }
        st.nodes[c] = linear;
        st.weights[c] = w;
    }
    return st;
}

double interpolate(const ValueField& field, std::span<const double> x) {
    const InterpolationStencil st = interpolation_stencil(field.grid(), x);
    double v = 0.0;
    for (std::size_t c = 0; c < st.nodes.size(); ++c) {
        if (st.weights[c] != 0.0) {
            v += st.weights[c] * field[st.nodes[c]];
        }
    }
    return v;
}

}  // namespace hjr
