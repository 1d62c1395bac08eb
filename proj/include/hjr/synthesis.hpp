#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hjr/dynamics.hpp"
#include "hjr/solver.hpp"

namespace hjr {

/// Disturbance applied during playback.
enum class DisturbancePolicy { Worst, Zero };

enum class Outcome { ReachedTarget, HorizonExhausted, LeftDomain };

[[nodiscard]] const char* to_string(Outcome outcome) noexcept;

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    /// One entry per integration step: controls.size() == times.size() - 1.
    std::vector<std::vector<double>> controls;
    std::vector<std::vector<double>> disturbances;
    /// Value at each state for the horizon remaining at that instant.
    std::vector<double> values;
    Outcome outcome = Outcome::HorizonExhausted;
};

/// ∇V of result.fields[k] at x: central differences at the enclosing cell's
/// nodes, blended with the multilinear weights.
[[nodiscard]] State gradient_at(const SolveResult& result, std::size_t k, std::span<const double> x);

/// V at an arbitrary elapsed horizon in [0, tau.back()], linear in time
/// between stored fields and multilinear in space.
[[nodiscard]] double value_at(const SolveResult& result, double horizon, std::span<const double> x);

/// One classical Runge-Kutta step of ẋ = f(x, u, d) with inputs held constant.
[[nodiscard]] State integrate_rk4(const SystemSpec& sys, std::span<const double> x,
                                  std::span<const double> u, std::span<const double> d, double dt);

/**
 * Closed-loop playback of the optimal controller from x0.
 *
 * Walks the stored horizons from tau.back() down to 0. Within the interval
 * (tau[k-1], tau[k]] the costate comes from fields[k]; inputs are recomputed
 * at the start of every substep and held during it. Stops early when the
 * target (fields[0] <= 0) is reached or a non-periodic coordinate exits the
 * grid; the exiting state is not recorded.
 */
[[nodiscard]] Trajectory compute_trajectory(const SolveResult& result, const SystemSpec& sys,
                                            std::span<const double> x0, const InputModes& modes,
                                            DisturbancePolicy policy,
                                            std::size_t substeps_per_interval);

}  // namespace hjr
