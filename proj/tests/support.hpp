#pragma once

// Problem builders and measurements shared by the unit tests and the acceptance binary.

#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "hjr/grid.hpp"
#include "hjr/solver.hpp"
#include "hjr/value_field.hpp"

namespace hjr::testing {

inline std::shared_ptr<const Grid> line_grid(double lo, double hi, std::size_t n) {
    return std::make_shared<const Grid>(std::vector<double>{lo}, std::vector<double>{hi},
                                        std::vector<std::size_t>{n}, std::vector<bool>{false});
}

inline std::shared_ptr<const Grid> dubins_grid(std::size_t n = 51) {
    return std::make_shared<const Grid>(std::vector<double>{-5.0, -5.0, -std::numbers::pi},
                                        std::vector<double>{5.0, 5.0, std::numbers::pi},
                                        std::vector<std::size_t>{n, n, n},
                                        std::vector<bool>{false, false, true});
}

inline std::vector<double> uniform_tau(double horizon, std::size_t intervals) {
    std::vector<double> tau(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        tau[k] = horizon * static_cast<double>(k) / static_cast<double>(intervals);
    }
    tau.back() = horizon;
    return tau;
}

/// 1-D advection at unit speed from the target [-0.5, 0.5], set (not tube) semantics.
inline SolveConfig advection_problem(std::size_t nodes) {
    const auto grid = line_grid(-3.0, 3.0, nodes);
    const std::vector<double> lo{-0.5}, hi{0.5};
    return SolveConfig{make_advection({1.0}), shape_rectangle(grid, lo, hi), {0.0, 1.0},
                       InputModes{}, MinWith::None};
}

/// ẋ = u, |u| <= 1, minimizing control, target [-1, 1], tube semantics.
inline SolveConfig integrator_problem(std::size_t nodes = 201) {
    const auto grid = line_grid(-4.0, 4.0, nodes);
    const std::vector<double> lo{-1.0}, hi{1.0};
    return SolveConfig{make_integrator({-1.0, 1.0}), shape_rectangle(grid, lo, hi), {0.0, 1.0},
                       InputModes{InputMode::Min, InputMode::Max}, MinWith::Tube};
}

/// Dubins car around a unit cylinder target with a ±0.1 disturbance box.
inline SolveConfig dubins_problem(std::size_t intervals = 1, std::size_t nodes = 51) {
    const auto grid = dubins_grid(nodes);
    const std::vector<std::size_t> ignore{2};
    const std::vector<double> center{0.0, 0.0};
    const Interval box{-0.1, 0.1};
    return SolveConfig{make_dubins_car(1.0, {-1.0, 1.0}, {box, box, box}),
                       shape_cylinder(grid, ignore, center, 1.0), uniform_tau(1.0, intervals),
                       InputModes{InputMode::Min, InputMode::Max}, MinWith::Tube};
}

/// Sign changes of a 1-D field, located by linear interpolation between nodes.
inline std::vector<double> zero_crossings(const ValueField& field) {
    const Grid& g = field.grid();
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < g.count(0); ++i) {
        const double a = field[i];
        const double b = field[i + 1];
        if ((a <= 0.0) != (b <= 0.0)) {
            const double x0 = g.coordinate(0, i);
            const double x1 = g.coordinate(0, i + 1);
            out.push_back(x0 + (0.0 - a) / (b - a) * (x1 - x0));
        }
    }
    return out;
}

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace hjr::testing
