#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hjr {

using State = std::vector<double>;
using MultiIndex = std::vector<std::size_t>;

/**
 * Rectangular node lattice over a box of state space.
 *
 * Non-periodic dimensions place counts[i] nodes from mins[i] to maxs[i]
 * inclusive. Periodic dimensions identify maxs[i] with mins[i], so the top
 * endpoint is not stored and spacing is extent / counts[i].
 *
 * Storage order for fields over the grid is row-major: the last dimension
 * varies fastest.
 */
class Grid {
public:
    Grid(std::vector<double> mins, std::vector<double> maxs,
         std::vector<std::size_t> counts, std::vector<bool> periodic);

    [[nodiscard]] std::size_t dims() const noexcept { return mins_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    [[nodiscard]] double min(std::size_t d) const { return mins_[d]; }
    [[nodiscard]] double max(std::size_t d) const { return maxs_[d]; }
    [[nodiscard]] std::size_t count(std::size_t d) const { return counts_[d]; }
    [[nodiscard]] bool periodic(std::size_t d) const { return periodic_[d]; }
    [[nodiscard]] double spacing(std::size_t d) const { return spacings_[d]; }
    [[nodiscard]] std::size_t stride(std::size_t d) const { return strides_[d]; }

    [[nodiscard]] const std::vector<double>& mins() const noexcept { return mins_; }
    [[nodiscard]] const std::vector<double>& maxs() const noexcept { return maxs_; }
    [[nodiscard]] const std::vector<std::size_t>& counts() const noexcept { return counts_; }
    [[nodiscard]] const std::vector<bool>& periodic_flags() const noexcept { return periodic_; }
    [[nodiscard]] const std::vector<double>& spacings() const noexcept { return spacings_; }

    /// Coordinate of node k along dimension d. No range check.
    [[nodiscard]] double coordinate(std::size_t d, std::size_t k) const noexcept;

    /// Index of node k along dimension d for the node with flat index `linear`.
    [[nodiscard]] std::size_t index_along(std::size_t linear, std::size_t d) const noexcept {
        return (linear / strides_[d]) % counts_[d];
    }

    [[nodiscard]] std::size_t linear_index(std::span<const std::size_t> idx) const;
    [[nodiscard]] MultiIndex multi_index(std::size_t linear) const;

    /// Coordinates of the node at `idx`; throws DomainError when out of range.
    [[nodiscard]] State state_at(std::span<const std::size_t> idx) const;
    /// Coordinates of the node with flat index `linear`, written into `out`.
    void state_at_linear(std::size_t linear, std::span<double> out) const noexcept;

    /// Period length for a periodic dimension, extent otherwise.
    [[nodiscard]] double extent(std::size_t d) const noexcept { return maxs_[d] - mins_[d]; }

    /// Maps a periodic coordinate into [min, max). Non-periodic values pass through.
    [[nodiscard]] double wrap(std::size_t d, double x) const noexcept;

    /// True when every non-periodic coordinate lies in [min, max].
    [[nodiscard]] bool contains(std::span<const double> x) const noexcept;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.mins_ == b.mins_ && a.maxs_ == b.maxs_ && a.counts_ == b.counts_ &&
               a.periodic_ == b.periodic_;
    }

private:
    std::vector<double> mins_;
    std::vector<double> maxs_;
    std::vector<std::size_t> counts_;
    std::vector<bool> periodic_;
    std::vector<double> spacings_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

/// Validating factory; same contract as the constructor.
[[nodiscard]] Grid create_grid(std::vector<double> mins, std::vector<double> maxs,
                               std::vector<std::size_t> counts, std::vector<bool> periodic);

}  // namespace hjr
