#pragma once

#include <cstddef>
#include <memory>

#include "hjr/dynamics.hpp"
#include "hjr/value_field.hpp"

namespace hjr {

/// Brute-force discrete-time game on a coarse grid, used to cross-check the PDE solver.
struct OracleConfig {
    std::shared_ptr<const Grid> grid;
    SystemSpec system;
    /// Uniform samples per input component, endpoints included.
    std::size_t control_samples = 2;
    std::size_t disturbance_samples = 2;
    double dt = 0.05;
    std::size_t steps = 0;
    InputMode u_mode = InputMode::Min;
    InputMode d_mode = InputMode::Max;
    bool tube = true;
};

/// Largest grid the oracle accepts.
inline constexpr std::size_t kOracleMaxNodes = 100'000;

/// Value assigned to successors that leave a non-periodic bound.
inline constexpr double kOracleOutOfBounds = 1e9;

/**
 * Semi-Lagrangian value recursion
 *   W₀ = target,
 *   W_{k+1}(x) = opt_u opt_d W_k(x + dt·f(x, u, d)),
 * over the sampled input sets, outer optimization over the control. With
 * `tube`, W_{k+1} is clipped from above by the target.
 */
[[nodiscard]] ValueField oracle_value(const OracleConfig& cfg, const ValueField& target);

/// Endpoint-inclusive uniform samples of the product box.
[[nodiscard]] std::vector<std::vector<double>> sample_box(const std::vector<Interval>& box,
                                                          std::size_t per_component);

}  // namespace hjr
