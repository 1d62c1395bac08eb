#include "hjr/synthesis.hpp"

#include <algorithm>
#include <string>

#include "hjr/error.hpp"

namespace hjr {

namespace {

void require_result(const SolveResult& result) {
    if (result.fields.empty() || result.fields.size() != result.tau.size()) {
        throw ArgumentError("solve result must hold one field per tau entry");
    }
}

State wrapped(const Grid& grid, std::span<const double> x) {
    State out(x.begin(), x.end());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = grid.wrap(d, out[d]);
    }
    return out;
}

}  // namespace

const char* to_string(Outcome outcome) noexcept {
    switch (outcome) {
        case Outcome::ReachedTarget:
            return "reached_target";
        case Outcome::HorizonExhausted:
            return "horizon_exhausted";
        case Outcome::LeftDomain:
            return "left_domain";
    }
    return "unknown";
}

State gradient_at(const SolveResult& result, std::size_t k, std::span<const double> x) {
    require_result(result);
    if (k >= result.fields.size()) {
        throw ArgumentError("time index " + std::to_string(k) + " out of range");
    }
    const ValueField& field = result.fields[k];
    const Grid& grid = field.grid();
    const InterpolationStencil st = interpolation_stencil(grid, x);
    State grad(grid.dims(), 0.0);
    for (std::size_t c = 0; c < st.nodes.size(); ++c) {
        if (st.weights[c] == 0.0) {
            continue;
        }
        for (std::size_t d = 0; d < grid.dims(); ++d) {
            grad[d] += st.weights[c] * central_difference(grid, field.values(), st.nodes[c], d);
        }
    }
    return grad;
}

double value_at(const SolveResult& result, double horizon, std::span<const double> x) {
    require_result(result);
    const auto& tau = result.tau;
    if (!(horizon >= 0.0) || horizon > tau.back() * (1.0 + 1e-12)) {
        throw DomainError("horizon outside the solved range");
    }
    const auto upper = std::lower_bound(tau.begin(), tau.end(), horizon);
    if (upper == tau.end()) {
        return interpolate(result.fields.back(), x);
    }
    const auto k = static_cast<std::size_t>(upper - tau.begin());
    if (tau[k] == horizon || k == 0) {
        return interpolate(result.fields[k], x);
    }
    const double w = (horizon - tau[k - 1]) / (tau[k] - tau[k - 1]);
    return (1.0 - w) * interpolate(result.fields[k - 1], x) + w * interpolate(result.fields[k], x);
}

State integrate_rk4(const SystemSpec& sys, std::span<const double> x, std::span<const double> u,
                    std::span<const double> d, double dt) {
    const std::size_t n = sys.state_dim();
    if (x.size() != n || u.size() != sys.control_dim() || d.size() != sys.disturbance_dim()) {
        throw DimensionError("state or input length does not match the system");
    }
    State k1(n), k2(n), k3(n), k4(n), tmp(n);
    sys.flow_into(x, u, d, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    sys.flow_into(tmp, u, d, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    sys.flow_into(tmp, u, d, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    sys.flow_into(tmp, u, d, k4);
    State out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

Trajectory compute_trajectory(const SolveResult& result, const SystemSpec& sys,
                              std::span<const double> x0, const InputModes& modes,
                              DisturbancePolicy policy, std::size_t substeps_per_interval) {
    require_result(result);
    if (substeps_per_interval == 0) {
        throw ArgumentError("substeps_per_interval must be at least 1");
    }
    const ValueField& target = result.fields.front();
    const Grid& grid = target.grid();
    if (sys.state_dim() != grid.dims() || x0.size() != grid.dims()) {
        throw DimensionError("initial state length does not match the grid");
    }
    if (!grid.contains(x0)) {
        throw DomainError("initial state outside the grid domain");
    }

    const auto& tau = result.tau;
    const std::size_t last = tau.size() - 1;
    Trajectory traj;
    State x = wrapped(grid, x0);
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    traj.values.push_back(interpolate(result.fields[last], x));
    if (interpolate(target, x) <= 0.0) {
        traj.outcome = Outcome::ReachedTarget;
        return traj;
    }

    std::vector<double> zero_dstb(sys.disturbance_dim(), 0.0);
    for (std::size_t k = last; k >= 1; --k) {
        const double dt = (tau[k] - tau[k - 1]) / static_cast<double>(substeps_per_interval);
        for (std::size_t j = 0; j < substeps_per_interval; ++j) {
            const State p = gradient_at(result, k, x);
            std::vector<double> u(sys.control_dim());
            sys.opt_ctrl_into(p, modes.control, u);
            std::vector<double> d = zero_dstb;
            if (policy == DisturbancePolicy::Worst) {
                sys.opt_dstb_into(p, modes.disturbance, d);
            }
            State next = wrapped(grid, integrate_rk4(sys, x, u, d, dt));
            if (!grid.contains(next)) {
                traj.outcome = Outcome::LeftDomain;
                return traj;
            }
            x = std::move(next);
            const double remaining =
                j + 1 == substeps_per_interval
                    ? tau[k - 1]
                    : tau[k] - static_cast<double>(j + 1) * dt;
            traj.times.push_back(tau[last] - remaining);
            traj.states.push_back(x);
            traj.controls.push_back(std::move(u));
            traj.disturbances.push_back(std::move(d));
            traj.values.push_back(value_at(result, remaining, x));
            if (interpolate(target, x) <= 0.0) {
                traj.outcome = Outcome::ReachedTarget;
                return traj;
            }
        }
    }
    traj.outcome = Outcome::HorizonExhausted;
    return traj;
}

}  // namespace hjr
