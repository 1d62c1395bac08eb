#include "hjr/contour.hpp"

#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>

#include "hjr/error.hpp"

namespace hjr {

namespace {

// Edge ids: horizontal edge (i,j)-(i+1,j) is 2*(i*(nb+1)+j), vertical edge
// (i,j)-(i,j+1) is 2*(i*(nb+1)+j)+1, with i in [0, na] and j in [0, nb] so the
// seam edges of periodic slices stay distinct from their wrapped twins.
class SliceLattice {
public:
    SliceLattice(const ValueField& field, const SliceSpec& slice) : field_(field) {
        const Grid& grid = field.grid();
        a_ = slice.free_dims[0];
        b_ = slice.free_dims[1];
        na_ = grid.count(a_);
        nb_ = grid.count(b_);
        cells_a_ = grid.periodic(a_) ? na_ : na_ - 1;
        cells_b_ = grid.periodic(b_) ? nb_ : nb_ - 1;

        State x(grid.dims());
        std::size_t f = 0;
        for (std::size_t d = 0; d < grid.dims(); ++d) {
            if (d != a_ && d != b_) {
                x[d] = slice.fixed[f++];
            }
        }
        values_.resize(na_ * nb_);
        for (std::size_t i = 0; i < na_; ++i) {
            for (std::size_t j = 0; j < nb_; ++j) {
                x[a_] = grid.coordinate(a_, i);
                x[b_] = grid.coordinate(b_, j);
                values_[i * nb_ + j] = interpolate(field, x);
            }
        }
    }

    [[nodiscard]] std::size_t cells_a() const { return cells_a_; }
    [[nodiscard]] std::size_t cells_b() const { return cells_b_; }

    // Corner value; i may equal na and j may equal nb on periodic wrap cells.
    [[nodiscard]] double value(std::size_t i, std::size_t j) const {
        return values_[(i % na_) * nb_ + (j % nb_)];
    }

    [[nodiscard]] double coord_a(std::size_t i) const {
        return i < na_ ? field_.grid().coordinate(a_, i) : field_.grid().max(a_);
    }
    [[nodiscard]] double coord_b(std::size_t j) const {
        return j < nb_ ? field_.grid().coordinate(b_, j) : field_.grid().max(b_);
    }

    [[nodiscard]] std::size_t horizontal(std::size_t i, std::size_t j) const {
        return 2 * (i * (nb_ + 1) + j);
    }
    [[nodiscard]] std::size_t vertical(std::size_t i, std::size_t j) const {
        return 2 * (i * (nb_ + 1) + j) + 1;
    }

    [[nodiscard]] std::array<double, 2> crossing(std::size_t edge, double level) const {
        const std::size_t cell = edge / 2;
        const std::size_t i = cell / (nb_ + 1);
        const std::size_t j = cell % (nb_ + 1);
        const bool is_vertical = edge % 2 == 1;
        const std::size_t i1 = is_vertical ? i : i + 1;
        const std::size_t j1 = is_vertical ? j + 1 : j;
        const double v0 = value(i, j);
        const double v1 = value(i1, j1);
        const double t = (level - v0) / (v1 - v0);
        const double xa = coord_a(i) + t * (coord_a(i1) - coord_a(i));
        const double xb = coord_b(j) + t * (coord_b(j1) - coord_b(j));
        return {xa, xb};
    }

private:
    const ValueField& field_;
    std::size_t a_ = 0, b_ = 0, na_ = 0, nb_ = 0, cells_a_ = 0, cells_b_ = 0;
    std::vector<double> values_;
};

using Segment = std::pair<std::size_t, std::size_t>;

std::vector<Segment> march(const SliceLattice& lat, double level) {
    std::vector<Segment> segments;
    for (std::size_t i = 0; i < lat.cells_a(); ++i) {
        for (std::size_t j = 0; j < lat.cells_b(); ++j) {
            const std::array<double, 4> v{lat.value(i, j), lat.value(i + 1, j),
                                          lat.value(i + 1, j + 1), lat.value(i, j + 1)};
            // Edge k joins corner k and corner k+1 (mod 4).
            const std::array<std::size_t, 4> edge{lat.horizontal(i, j), lat.vertical(i + 1, j),
                                                  lat.horizontal(i, j + 1), lat.vertical(i, j)};
            std::array<bool, 4> above{};
            unsigned mask = 0;
            for (std::size_t c = 0; c < 4; ++c) {
                above[c] = v[c] > level;
                mask |= static_cast<unsigned>(above[c]) << c;
            }
            if (mask == 0 || mask == 15) {
                continue;
            }
            if (mask == 5 || mask == 10) {
                const bool center_above = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
                // Cut off each corner whose side differs from the center's.
                for (std::size_t c = 0; c < 4; ++c) {
                    if (above[c] != center_above) {
                        segments.emplace_back(edge[(c + 3) % 4], edge[c]);
                    }
                }
                continue;
            }
            std::array<std::size_t, 2> crossing{};
            std::size_t n = 0;
            for (std::size_t e = 0; e < 4; ++e) {
                if (above[e] != above[(e + 1) % 4]) {
                    crossing[n++] = edge[e];
                }
            }
            segments.emplace_back(crossing[0], crossing[1]);
        }
    }
    return segments;
}

}  // namespace

void validate_slice(const Grid& grid, const SliceSpec& slice) {
    const auto [a, b] = slice.free_dims;
    if (grid.dims() < 2) {
        throw ArgumentError("slices need a grid with at least 2 dimensions");
    }
    if (a >= grid.dims() || b >= grid.dims() || a == b) {
        throw ArgumentError("slice free dimensions must be two distinct valid dimensions");
    }
    if (slice.fixed.size() != grid.dims() - 2) {
        throw ArgumentError("slice needs " + std::to_string(grid.dims() - 2) +
                            " fixed coordinates, got " + std::to_string(slice.fixed.size()));
    }
    std::size_t f = 0;
    for (std::size_t d = 0; d < grid.dims(); ++d) {
        if (d == a || d == b) {
            continue;
        }
        const double v = slice.fixed[f++];
        if (!std::isfinite(v) ||
            (!grid.periodic(d) && (v < grid.min(d) || v > grid.max(d)))) {
            throw ArgumentError("slice fixed coordinate for dimension " + std::to_string(d) +
                                " is outside the grid");
        }
    }
}

std::vector<Polyline> extract_contours(const ValueField& field, const SliceSpec& slice,
                                       double level) {
    validate_slice(field.grid(), slice);
    const SliceLattice lat(field, slice);
    const std::vector<Segment> segments = march(lat, level);

    std::unordered_map<std::size_t, std::vector<std::size_t>> at_edge;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        at_edge[segments[s].first].push_back(s);
        at_edge[segments[s].second].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);

    auto trace = [&](std::size_t start_edge, std::size_t seg) {
        Polyline line{lat.crossing(start_edge, level)};
        std::size_t edge = start_edge;
        while (true) {
            used[seg] = true;
            edge = segments[seg].first == edge ? segments[seg].second : segments[seg].first;
            line.push_back(lat.crossing(edge, level));
            std::size_t next = segments.size();
            for (const std::size_t cand : at_edge[edge]) {
                if (!used[cand]) {
                    next = cand;
                    break;
                }
            }
            if (next == segments.size()) {
                return line;
            }
            seg = next;
        }
    };

    std::vector<Polyline> lines;
    // Open chains first, each from one of its dangling ends.
    for (std::size_t s = 0; s < segments.size(); ++s) {
        for (const std::size_t end : {segments[s].first, segments[s].second}) {
            if (!used[s] && at_edge[end].size() == 1) {
                lines.push_back(trace(end, s));
            }
        }
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!used[s]) {
            lines.push_back(trace(segments[s].first, s));
        }
    }
    return lines;
}

}  // namespace hjr
