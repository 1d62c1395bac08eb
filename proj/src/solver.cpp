#include "hjr/solver.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

#include "hjr/error.hpp"
#include "hjr/parallel.hpp"

namespace hjr {

namespace {

// Per-worker buffers so the node loop does not allocate.
struct Scratch {
    explicit Scratch(const SystemSpec& sys)
        : x(sys.state_dim()),
          p_left(sys.state_dim()),
          p_right(sys.state_dim()),
          p_mean(sys.state_dim()),
          u(sys.control_dim()),
          d(sys.disturbance_dim()),
          f(sys.state_dim()) {}

    State x, p_left, p_right, p_mean;
    std::vector<double> u, d, f;
};

double hamiltonian_with(const SystemSpec& sys, std::span<const double> x,
                        std::span<const double> p, const InputModes& modes, Scratch& s) {
    sys.opt_ctrl_into(p, modes.control, s.u);
    sys.opt_dstb_into(p, modes.disturbance, s.d);
    sys.flow_into(x, s.u, s.d, s.f);
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        h += p[i] * s.f[i];
    }
    return h;
}

// Expects s.p_left / s.p_right filled; leaves the mean in s.p_mean.
double horizon_rate_with(const SystemSpec& sys, std::span<const double> x,
                         std::span<const double> alpha, const InputModes& modes,
                         Direction direction, Scratch& s) {
    double dissipation = 0.0;
    for (std::size_t i = 0; i < s.p_mean.size(); ++i) {
        s.p_mean[i] = 0.5 * (s.p_left[i] + s.p_right[i]);
        dissipation += 0.5 * alpha[i] * (s.p_right[i] - s.p_left[i]);
    }
    const double h = hamiltonian_with(sys, x, s.p_mean, modes, s);
    // Forward problems evaluate p·(−f) at the inputs the modes select for p·f, so a mode
    // means the same thing in both directions.
    return (direction == Direction::Forward ? -h : h) + dissipation;
}

void require_dims(const SystemSpec& sys, const Grid& grid) {
    if (sys.state_dim() != grid.dims()) {
        throw DimensionError("system state dimension " + std::to_string(sys.state_dim()) +
                             " does not match grid dimension " + std::to_string(grid.dims()));
    }
}

void require_alpha(std::span<const double> alpha, std::size_t dims) {
    if (alpha.size() != dims) {
        throw DimensionError("dissipation vector length does not match grid dimension");
    }
    for (const double a : alpha) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw ArgumentError("dissipation coefficients must be finite and non-negative");
        }
    }
}

std::vector<double> euler_values(const Grid& grid, std::span<const double> v,
                                 const SystemSpec& sys, double dt, const InputModes& modes,
                                 std::span<const double> alpha, Direction direction,
                                 std::size_t threads) {
    std::vector<double> out(v.size());
    parallel_for(v.size(), threads, [&](std::size_t begin, std::size_t end) {
        Scratch s(sys);
        for (std::size_t i = begin; i < end; ++i) {
            grid.state_at_linear(i, s.x);
            for (std::size_t dim = 0; dim < grid.dims(); ++dim) {
                const OneSided os = one_sided_difference(grid, v, i, dim);
                s.p_left[dim] = os.left;
                s.p_right[dim] = os.right;
            }
            out[i] = v[i] + dt * horizon_rate_with(sys, s.x, alpha, modes, direction, s);
        }
    });
    return out;
}

std::optional<std::size_t> first_non_finite(std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            return i;
        }
    }
    return std::nullopt;
}

[[noreturn]] void throw_divergence(const Grid& grid, std::size_t node, std::size_t step,
                                   double dt) {
    State x(grid.dims());
    grid.state_at_linear(node, x);
    std::ostringstream msg;
    msg << "non-finite value at state (";
    for (std::size_t d = 0; d < x.size(); ++d) {
        msg << (d ? ", " : "") << x[d];
    }
    msg << ") on step " << step << " with dt " << dt;
    throw DivergenceError(msg.str());
}

std::vector<double> rk2_values(const Grid& grid, std::span<const double> v, const SystemSpec& sys,
                               double dt, const InputModes& modes, std::span<const double> alpha,
                               Direction direction, std::size_t threads) {
    const std::vector<double> stage1 = euler_values(grid, v, sys, dt, modes, alpha, direction, threads);
    std::vector<double> stage2 = euler_values(grid, stage1, sys, dt, modes, alpha, direction, threads);
    for (std::size_t i = 0; i < stage2.size(); ++i) {
        stage2[i] = 0.5 * (v[i] + stage2[i]);
    }
    return stage2;
}

void assert_cfl([[maybe_unused]] const Grid& grid, [[maybe_unused]] std::span<const double> alpha,
                [[maybe_unused]] double dt) {
#ifndef NDEBUG
    double rate = 0.0;
    for (std::size_t d = 0; d < alpha.size(); ++d) {
        rate += alpha[d] / grid.spacing(d);
    }
    assert(dt >= 0.0 && dt * rate <= 1.0 + 1e-12 && "time step violates the CFL bound");
#endif
}

void validate(const SolveConfig& cfg) {
    require_dims(cfg.system, cfg.grid());
    if (cfg.tau.empty()) {
        throw ArgumentError("tau must contain at least the initial time 0");
    }
    if (cfg.tau.front() != 0.0) {
        throw ArgumentError("tau must start at 0");
    }
    for (std::size_t k = 1; k < cfg.tau.size(); ++k) {
        if (!std::isfinite(cfg.tau[k]) || !(cfg.tau[k] > cfg.tau[k - 1])) {
            throw ArgumentError("tau not strictly increasing");
        }
    }
    if (!(cfg.cfl_factor > 0.0 && cfg.cfl_factor <= 1.0)) {
        throw ArgumentError("cfl_factor must be in (0,1]");
    }
    if (cfg.obstacles) {
        require_same_grid(cfg.target, *cfg.obstacles, "solve obstacles");
    }
}

}  // namespace

double hamiltonian(const SystemSpec& sys, double /*t*/, std::span<const double> x,
                   std::span<const double> p, const InputModes& modes) {
    if (x.size() != sys.state_dim() || p.size() != sys.state_dim()) {
        throw DimensionError("state and costate must match the system dimension");
    }
    Scratch s(sys);
    return hamiltonian_with(sys, x, p, modes, s);
}

double lf_numerical_hamiltonian(const SystemSpec& sys, double t, std::span<const double> x,
                                std::span<const double> p_left, std::span<const double> p_right,
                                std::span<const double> alpha, const InputModes& modes) {
    const std::size_t n = sys.state_dim();
    if (p_left.size() != n || p_right.size() != n) {
        throw DimensionError("costates must match the system dimension");
    }
    require_alpha(alpha, n);
    State mean(n);
    double dissipation = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean[i] = 0.5 * (p_left[i] + p_right[i]);
        dissipation += 0.5 * alpha[i] * (p_right[i] - p_left[i]);
    }
    return hamiltonian(sys, t, x, mean, modes) - dissipation;
}

double lf_horizon_rate(const SystemSpec& sys, double /*t*/, std::span<const double> x,
                       std::span<const double> p_left, std::span<const double> p_right,
                       std::span<const double> alpha, const InputModes& modes) {
    const std::size_t n = sys.state_dim();
    if (x.size() != n || p_left.size() != n || p_right.size() != n) {
        throw DimensionError("state and costates must match the system dimension");
    }
    require_alpha(alpha, n);
    Scratch s(sys);
    std::copy(p_left.begin(), p_left.end(), s.p_left.begin());
    std::copy(p_right.begin(), p_right.end(), s.p_right.begin());
    return horizon_rate_with(sys, x, alpha, modes, Direction::Backward, s);
}

double cfl_dt(std::span<const double> alpha, std::span<const double> spacings, double cfl_factor,
              double remaining) {
    if (alpha.size() != spacings.size()) {
        throw DimensionError("alpha and spacings must have equal length");
    }
    double rate = 0.0;
    for (std::size_t d = 0; d < alpha.size(); ++d) {
        if (!(spacings[d] > 0.0)) {
            throw ArgumentError("grid spacings must be positive");
        }
        rate += alpha[d] / spacings[d];
    }
    if (rate == 0.0) {
        return remaining;
    }
    return cfl_factor / rate;
}

ValueField euler_step(const ValueField& field, const SystemSpec& sys, double /*t*/, double dt,
                      const InputModes& modes, std::span<const double> alpha,
                      Direction direction, std::size_t threads) {
    const Grid& grid = field.grid();
    require_dims(sys, grid);
    require_alpha(alpha, grid.dims());
    assert_cfl(grid, alpha, dt);
    std::vector<double> out =
        euler_values(grid, field.values(), sys, dt, modes, alpha, direction, threads);
    if (const auto bad = first_non_finite(out)) {
        throw_divergence(grid, *bad, 0, dt);
    }
    return make_field_unchecked(field.grid_ptr(), std::move(out));
}

ValueField tvd_rk2_step(const ValueField& field, const SystemSpec& sys, double /*t*/, double dt,
                        const InputModes& modes, std::span<const double> alpha,
                        Direction direction, std::size_t threads) {
    const Grid& grid = field.grid();
    require_dims(sys, grid);
    require_alpha(alpha, grid.dims());
    assert_cfl(grid, alpha, dt);
    std::vector<double> out =
        rk2_values(grid, field.values(), sys, dt, modes, alpha, direction, threads);
    if (const auto bad = first_non_finite(out)) {
        throw_divergence(grid, *bad, 0, dt);
    }
    return make_field_unchecked(field.grid_ptr(), std::move(out));
}

ValueField apply_min_with(const ValueField& candidate, const ValueField& previous) {
    require_same_grid(candidate, previous, "apply_min_with");
    std::vector<double> out(candidate.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::min(candidate[i], previous[i]);
    }
    return make_field_unchecked(candidate.grid_ptr(), std::move(out));
}

ValueField apply_obstacles(const ValueField& field, const ValueField& g_obs) {
    require_same_grid(field, g_obs, "apply_obstacles");
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::max(field[i], -g_obs[i]);
    }
    return make_field_unchecked(field.grid_ptr(), std::move(out));
}

SolveResult solve(const SolveConfig& config) {
    validate(config);
    const auto started = std::chrono::steady_clock::now();
    const Grid& grid = config.grid();
    const std::vector<double> alpha = dissipation_bounds(config.system, grid);
    const std::size_t threads = resolve_threads(config.threads);

    SolveResult result;
    result.tau = config.tau;
    result.fields.reserve(config.tau.size());
    result.fields.push_back(config.obstacles ? apply_obstacles(config.target, *config.obstacles)
                                             : config.target);

    std::vector<double> current(result.fields.front().values().begin(),
                                result.fields.front().values().end());
    for (std::size_t k = 0; k + 1 < config.tau.size(); ++k) {
        const double t_end = config.tau[k + 1];
        double elapsed = config.tau[k];
        while (elapsed < t_end) {
            const double remaining = t_end - elapsed;
            double dt = cfl_dt(alpha, grid.spacings(), config.cfl_factor, remaining);
            // Absorb a sliver of leftover interval into this step instead of a tiny extra one.
            const bool last = dt >= remaining * (1.0 - 1e-9);
            if (last) {
                dt = std::min(dt, remaining);
            }
            std::vector<double> next = rk2_values(grid, current, config.system, dt, config.modes,
                                                  alpha, config.direction, threads);
            if (const auto bad = first_non_finite(next)) {
                throw_divergence(grid, *bad, result.stats.steps + 1, dt);
            }
            if (config.min_with == MinWith::Tube) {
                for (std::size_t i = 0; i < next.size(); ++i) {
                    next[i] = std::min(next[i], current[i]);
                }
            }
            if (config.obstacles) {
                const auto g = config.obstacles->values();
                for (std::size_t i = 0; i < next.size(); ++i) {
                    next[i] = std::max(next[i], -g[i]);
                }
            }
            current = std::move(next);
            elapsed = last ? t_end : elapsed + dt;
            ++result.stats.steps;
            result.stats.dt_history.push_back(dt);
        }
        result.fields.push_back(make_field_unchecked(config.target.grid_ptr(), current));
    }

    result.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<bool> zero_sublevel(const ValueField& field) {
    std::vector<bool> inside(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        inside[i] = field[i] <= 0.0;
    }
    return inside;
}

}  // namespace hjr
