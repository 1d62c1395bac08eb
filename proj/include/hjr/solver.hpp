#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hjr/dynamics.hpp"
#include "hjr/value_field.hpp"

namespace hjr {

/// Tube keeps the running pointwise minimum of the value; None gives the set.
enum class MinWith { None, Tube };

/// Forward problems reuse the backward march with the flow negated; input modes
/// still refer to p·f of the original dynamics.
enum class Direction { Backward, Forward };

struct InputModes {
    InputMode control = InputMode::Min;
    InputMode disturbance = InputMode::Max;

    friend bool operator==(const InputModes&, const InputModes&) = default;
};

struct SolveConfig {
    SystemSpec system;
    ValueField target;
    /// Elapsed horizons at which fields are recorded; starts at 0, strictly increasing.
    std::vector<double> tau;
    InputModes modes{};
    MinWith min_with = MinWith::Tube;
    Direction direction = Direction::Backward;
    /// Non-positive inside forbidden regions.
    std::optional<ValueField> obstacles{};
    double cfl_factor = 0.5;
    /// Worker threads for the per-node update; 0 uses the hardware concurrency.
    std::size_t threads = 0;

    [[nodiscard]] const Grid& grid() const noexcept { return target.grid(); }
};

struct SolveStats {
    std::size_t steps = 0;
    double wall_seconds = 0.0;
    std::vector<double> dt_history;
};

struct SolveResult {
    std::vector<double> tau;
    /// fields[k] is the value after an elapsed horizon tau[k].
    std::vector<ValueField> fields;
    SolveStats stats;
};

/// max over u, min over d (per modes) of p·f, with the closed-form optimal inputs.
[[nodiscard]] double hamiltonian(const SystemSpec& sys, double t, std::span<const double> x,
                                 std::span<const double> p, const InputModes& modes);

/// Lax-Friedrichs numerical Hamiltonian H(p̄) − Σ αᵢ (p⁺ᵢ − p⁻ᵢ) / 2, p̄ the mean of
/// the one-sided costates. Monotone for ∂ₜV + H = 0 marched forward in t.
[[nodiscard]] double lf_numerical_hamiltonian(const SystemSpec& sys, double t,
                                              std::span<const double> x,
                                              std::span<const double> p_left,
                                              std::span<const double> p_right,
                                              std::span<const double> alpha,
                                              const InputModes& modes);

/// Per-node growth rate of V in elapsed horizon: H(p̄) + Σ αᵢ (p⁺ᵢ − p⁻ᵢ) / 2.
/// This is the Lax-Friedrichs flux of −H, the monotone choice for V_τ = H.
[[nodiscard]] double lf_horizon_rate(const SystemSpec& sys, double t, std::span<const double> x,
                                     std::span<const double> p_left,
                                     std::span<const double> p_right,
                                     std::span<const double> alpha, const InputModes& modes);

/// cfl_factor / Σ αᵢ / hᵢ, or `remaining` when every αᵢ is zero.
[[nodiscard]] double cfl_dt(std::span<const double> alpha, std::span<const double> spacings,
                            double cfl_factor, double remaining);

/// One forward-Euler step of V_τ = H(∇V) in elapsed horizon: V + dt · rate.
[[nodiscard]] ValueField euler_step(const ValueField& field, const SystemSpec& sys, double t,
                                    double dt, const InputModes& modes,
                                    std::span<const double> alpha,
                                    Direction direction = Direction::Backward,
                                    std::size_t threads = 1);

/// Heun / TVD-RK2: (V + euler(euler(V))) / 2.
[[nodiscard]] ValueField tvd_rk2_step(const ValueField& field, const SystemSpec& sys, double t,
                                      double dt, const InputModes& modes,
                                      std::span<const double> alpha,
                                      Direction direction = Direction::Backward,
                                      std::size_t threads = 1);

/// Pointwise min(candidate, previous).
[[nodiscard]] ValueField apply_min_with(const ValueField& candidate, const ValueField& previous);

/// Pointwise max(field, −g_obs).
[[nodiscard]] ValueField apply_obstacles(const ValueField& field, const ValueField& g_obs);

/// Marches the target through every interval of `config.tau`. Throws
/// DivergenceError (with node state, step and dt) on a non-finite value.
[[nodiscard]] SolveResult solve(const SolveConfig& config);

/// Nodewise membership {x : V(x) <= 0}.
[[nodiscard]] std::vector<bool> zero_sublevel(const ValueField& field);

}  // namespace hjr
