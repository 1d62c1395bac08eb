#include "hjr/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hjr/error.hpp"

namespace hjr {

std::vector<std::vector<double>> sample_box(const std::vector<Interval>& box,
                                            std::size_t per_component) {
    std::vector<std::vector<double>> samples{{}};
    for (const Interval& r : box) {
        std::vector<std::vector<double>> grown;
        grown.reserve(samples.size() * per_component);
        for (const auto& prefix : samples) {
            for (std::size_t s = 0; s < per_component; ++s) {
                const double w = static_cast<double>(s) / static_cast<double>(per_component - 1);
                auto next = prefix;
                // Endpoints exactly, so bang-bang optima are representable.
                next.push_back(s + 1 == per_component ? r.hi : r.lo + w * (r.hi - r.lo));
                grown.push_back(std::move(next));
            }
        }
        samples = std::move(grown);
    }
    return samples;
}

ValueField oracle_value(const OracleConfig& cfg, const ValueField& target) {
    if (!cfg.grid) {
        throw ArgumentError("oracle requires a grid");
    }
    const Grid& grid = *cfg.grid;
    if (!(target.grid() == grid)) {
        throw GridMismatchError("oracle target is not defined on the oracle grid");
    }
    if (grid.size() > kOracleMaxNodes) {
        throw ArgumentError("oracle grid has " + std::to_string(grid.size()) +
                            " nodes; the limit is " + std::to_string(kOracleMaxNodes));
    }
    if (cfg.control_samples < 2 || cfg.disturbance_samples < 2) {
        throw ArgumentError("oracle needs at least 2 samples per input component");
    }
    if (!(cfg.dt > 0.0)) {
        throw ArgumentError("oracle dt must be positive");
    }
    if (cfg.system.state_dim() != grid.dims()) {
        throw DimensionError("oracle system dimension does not match the grid");
    }

    const auto controls = sample_box(cfg.system.control_bounds(), cfg.control_samples);
    const auto disturbances = sample_box(cfg.system.disturbance_bounds(), cfg.disturbance_samples);
    const double u_sign = cfg.u_mode == InputMode::Max ? 1.0 : -1.0;
    const double d_sign = cfg.d_mode == InputMode::Max ? 1.0 : -1.0;

    ValueField w = target;
    State x(grid.dims());
    State f(grid.dims());
    State succ(grid.dims());
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        std::vector<double> next(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.state_at_linear(i, x);
            // Optimize sign·value so that both modes become a maximization.
            double best_u = -std::numeric_limits<double>::infinity();
            for (const auto& u : controls) {
                double best_d = -std::numeric_limits<double>::infinity();
                for (const auto& d : disturbances) {
                    cfg.system.flow_into(x, u, d, f);
                    for (std::size_t k = 0; k < x.size(); ++k) {
                        succ[k] = x[k] + cfg.dt * f[k];
                    }
                    const double v =
                        grid.contains(succ) ? interpolate(w, succ) : kOracleOutOfBounds;
                    best_d = std::max(best_d, d_sign * v);
                }
                best_u = std::max(best_u, u_sign * (d_sign * best_d));
            }
            double value = u_sign * best_u;
            if (cfg.tube) {
                value = std::min(value, target[i]);
            }
            next[i] = value;
        }
        w = ValueField(cfg.grid, std::move(next));
    }
    return w;
}

}  // namespace hjr
