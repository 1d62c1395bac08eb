#include "hjr/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hjr/error.hpp"

namespace hjr {

Grid::Grid(std::vector<double> mins, std::vector<double> maxs,
           std::vector<std::size_t> counts, std::vector<bool> periodic)
    : mins_(std::move(mins)),
      maxs_(std::move(maxs)),
      counts_(std::move(counts)),
      periodic_(std::move(periodic)) {
    const std::size_t n = mins_.size();
    if (n == 0) {
        throw DimensionError("grid needs at least one dimension");
    }
    if (maxs_.size() != n || counts_.size() != n || periodic_.size() != n) {
        throw DimensionError("grid mins, maxs, counts and periodic must have equal length");
    }
    spacings_.resize(n);
    strides_.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
        if (!std::isfinite(mins_[d]) || !std::isfinite(maxs_[d]) || !(maxs_[d] > mins_[d])) {
            throw ArgumentError("grid dimension " + std::to_string(d) +
                                ": max must be greater than min");
        }
        if (counts_[d] < 3) {
            throw ArgumentError("grid dimension " + std::to_string(d) +
                                ": at least 3 nodes required");
        }
        const double cells = periodic_[d] ? static_cast<double>(counts_[d])
                                          : static_cast<double>(counts_[d] - 1);
        spacings_[d] = (maxs_[d] - mins_[d]) / cells;
    }
    std::size_t total = 1;
    for (std::size_t d = n; d-- > 0;) {
        strides_[d] = total;
        if (total > std::numeric_limits<std::size_t>::max() / counts_[d]) {
            throw ArgumentError("grid node count overflows the addressable range");
        }
        total *= counts_[d];
    }
    size_ = total;
}

double Grid::coordinate(std::size_t d, std::size_t k) const noexcept {
    // Lerp form keeps grids symmetric about zero exactly symmetric in floating point.
    const double cells = periodic_[d] ? static_cast<double>(counts_[d])
                                      : static_cast<double>(counts_[d] - 1);
    const double kk = static_cast<double>(k);
    return (mins_[d] * (cells - kk) + maxs_[d] * kk) / cells;
}

std::size_t Grid::linear_index(std::span<const std::size_t> idx) const {
    if (idx.size() != dims()) {
        throw DimensionError("multi-index length does not match grid dimension");
    }
    std::size_t linear = 0;
    for (std::size_t d = 0; d < dims(); ++d) {
        if (idx[d] >= counts_[d]) {
            throw DomainError("index " + std::to_string(idx[d]) + " out of range in dimension " +
                              std::to_string(d));
        }
        linear += idx[d] * strides_[d];
    }
    return linear;
}

MultiIndex Grid::multi_index(std::size_t linear) const {
    if (linear >= size_) {
        throw DomainError("flat index out of range");
    }
    MultiIndex idx(dims());
    for (std::size_t d = 0; d < dims(); ++d) {
        idx[d] = index_along(linear, d);
    }
    return idx;
}

State Grid::state_at(std::span<const std::size_t> idx) const {
    if (idx.size() != dims()) {
        throw DimensionError("multi-index length does not match grid dimension");
    }
    State x(dims());
    for (std::size_t d = 0; d < dims(); ++d) {
        if (idx[d] >= counts_[d]) {
            throw DomainError("index " + std::to_string(idx[d]) + " out of range in dimension " +
                              std::to_string(d));
        }
        x[d] = coordinate(d, idx[d]);
    }
    return x;
}

void Grid::state_at_linear(std::size_t linear, std::span<double> out) const noexcept {
    for (std::size_t d = 0; d < dims(); ++d) {
        out[d] = coordinate(d, index_along(linear, d));
    }
}

double Grid::wrap(std::size_t d, double x) const noexcept {
    if (!periodic_[d]) {
        return x;
    }
    const double period = maxs_[d] - mins_[d];
    double r = std::fmod(x - mins_[d], period);
    if (r < 0.0) {
        r += period;
    }
    double w = mins_[d] + r;
    if (w >= maxs_[d]) {
        w = mins_[d];
    }
    return w;
}

bool Grid::contains(std::span<const double> x) const noexcept {
    if (x.size() != dims()) {
        return false;
    }
    for (std::size_t d = 0; d < dims(); ++d) {
        if (!std::isfinite(x[d])) {
            return false;
        }
        if (!periodic_[d] && (x[d] < mins_[d] || x[d] > maxs_[d])) {
            return false;
        }
    }
    return true;
}

Grid create_grid(std::vector<double> mins, std::vector<double> maxs,
                 std::vector<std::size_t> counts, std::vector<bool> periodic) {
    return Grid(std::move(mins), std::move(maxs), std::move(counts), std::move(periodic));
}

}  // namespace hjr
