#include "hjr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hjr/error.hpp"

namespace hjr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Range minimum at a zero coefficient, for both modes.
double bang_bang(double coeff, const Interval& range, InputMode mode) noexcept {
    if (coeff == 0.0) {
        return range.lo;
    }
    const bool pick_low = (mode == InputMode::Min) == (coeff > 0.0);
    return pick_low ? range.lo : range.hi;
}

void require_interval(const Interval& r, const char* what) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
        throw ArgumentError(std::string(what) + " range must satisfy lower <= upper");
    }
}

void require_length(std::span<const double> v, std::size_t n, const char* what) {
    if (v.size() != n) {
        throw DimensionError(std::string(what) + " has length " + std::to_string(v.size()) +
                             ", expected " + std::to_string(n));
    }
}

void require_within(std::span<const double> v, const std::vector<Interval>& box,
                    const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double slack = 1e-12 * std::max(1.0, box[i].magnitude());
        if (!(v[i] >= box[i].lo - slack && v[i] <= box[i].hi + slack)) {
            throw ArgumentError(std::string(what) + " component " + std::to_string(i) +
                                " outside its admissible range");
        }
    }
}

}  // namespace

double Interval::magnitude() const noexcept { return std::max(std::abs(lo), std::abs(hi)); }

SystemSpec::SystemSpec(Model model) : model_(std::move(model)) {
    std::visit(Overloaded{
                   [](const DubinsCar& m) {
                       if (!(m.speed > 0.0) || !std::isfinite(m.speed)) {
                           throw ArgumentError("Dubins car speed must be positive");
                       }
                       require_interval(m.turn_rate, "turn rate");
                       for (const auto& r : m.disturbance) {
                           require_interval(r, "disturbance");
                       }
                   },
                   [](const Integrator1D& m) { require_interval(m.control, "control"); },
                   [](const Advection& m) {
                       if (m.velocity.empty()) {
                           throw ArgumentError("advection velocity must be non-empty");
                       }
                       for (const double v : m.velocity) {
                           if (!std::isfinite(v)) {
                               throw ArgumentError("advection velocity must be finite");
                           }
                       }
                   },
               },
               model_);
}

std::size_t SystemSpec::state_dim() const noexcept {
    return std::visit(Overloaded{
                          [](const DubinsCar&) -> std::size_t { return 3; },
                          [](const Integrator1D&) -> std::size_t { return 1; },
                          [](const Advection& m) -> std::size_t { return m.velocity.size(); },
                      },
                      model_);
}

std::size_t SystemSpec::control_dim() const noexcept {
    return std::holds_alternative<Advection>(model_) ? 0 : 1;
}

std::size_t SystemSpec::disturbance_dim() const noexcept {
    return std::holds_alternative<DubinsCar>(model_) ? 3 : 0;
}

std::vector<Interval> SystemSpec::control_bounds() const {
    return std::visit(Overloaded{
                          [](const DubinsCar& m) { return std::vector<Interval>{m.turn_rate}; },
                          [](const Integrator1D& m) { return std::vector<Interval>{m.control}; },
                          [](const Advection&) { return std::vector<Interval>{}; },
                      },
                      model_);
}

std::vector<Interval> SystemSpec::disturbance_bounds() const {
    if (const auto* car = std::get_if<DubinsCar>(&model_)) {
        return {car->disturbance.begin(), car->disturbance.end()};
    }
    return {};
}

void SystemSpec::flow_into(std::span<const double> x, std::span<const double> u,
                           std::span<const double> d, std::span<double> out) const noexcept {
    std::visit(Overloaded{
                   [&](const DubinsCar& m) {
                       out[0] = m.speed * std::cos(x[2]) + d[0];
                       out[1] = m.speed * std::sin(x[2]) + d[1];
                       out[2] = u[0] + d[2];
                   },
                   [&](const Integrator1D&) { out[0] = u[0]; },
                   [&](const Advection& m) { std::copy(m.velocity.begin(), m.velocity.end(), out.begin()); },
               },
               model_);
}

void SystemSpec::opt_ctrl_into(std::span<const double> p, InputMode mode,
                               std::span<double> out) const noexcept {
    std::visit(Overloaded{
                   [&](const DubinsCar& m) { out[0] = bang_bang(p[2], m.turn_rate, mode); },
                   [&](const Integrator1D& m) { out[0] = bang_bang(p[0], m.control, mode); },
                   [](const Advection&) {},
               },
               model_);
}

void SystemSpec::opt_dstb_into(std::span<const double> p, InputMode mode,
                               std::span<double> out) const noexcept {
    if (const auto* car = std::get_if<DubinsCar>(&model_)) {
        for (std::size_t i = 0; i < 3; ++i) {
            out[i] = bang_bang(p[i], car->disturbance[i], mode);
        }
    }
}

SystemSpec make_dubins_car(double speed, Interval turn_rate, std::array<Interval, 3> disturbance) {
    return SystemSpec(DubinsCar{speed, turn_rate, disturbance});
}

SystemSpec make_integrator(Interval control) { return SystemSpec(Integrator1D{control}); }

SystemSpec make_advection(std::vector<double> velocity) {
    return SystemSpec(Advection{std::move(velocity)});
}

State flow(const SystemSpec& sys, std::span<const double> x, std::span<const double> u,
           std::span<const double> d, double /*t*/) {
    require_length(x, sys.state_dim(), "state");
    require_length(u, sys.control_dim(), "control");
    require_length(d, sys.disturbance_dim(), "disturbance");
    require_within(u, sys.control_bounds(), "control");
    require_within(d, sys.disturbance_bounds(), "disturbance");
    State out(sys.state_dim());
    sys.flow_into(x, u, d, out);
    return out;
}

std::vector<double> opt_ctrl(const SystemSpec& sys, double /*t*/, std::span<const double> x,
                             std::span<const double> p, InputMode mode) {
    require_length(x, sys.state_dim(), "state");
    require_length(p, sys.state_dim(), "costate");
    std::vector<double> u(sys.control_dim());
    sys.opt_ctrl_into(p, mode, u);
    return u;
}

std::vector<double> opt_dstb(const SystemSpec& sys, double /*t*/, std::span<const double> x,
                             std::span<const double> p, InputMode mode) {
    require_length(x, sys.state_dim(), "state");
    require_length(p, sys.state_dim(), "costate");
    std::vector<double> d(sys.disturbance_dim());
    sys.opt_dstb_into(p, mode, d);
    return d;
}

std::vector<double> dissipation_bounds(const SystemSpec& sys, std::span<const Interval> region) {
    if (region.size() != sys.state_dim()) {
        throw DimensionError("region has " + std::to_string(region.size()) +
                             " intervals, expected " + std::to_string(sys.state_dim()));
    }
    return std::visit(
        Overloaded{
            [](const DubinsCar& m) {
                return std::vector<double>{m.speed + m.disturbance[0].magnitude(),
                                           m.speed + m.disturbance[1].magnitude(),
                                           m.turn_rate.magnitude() + m.disturbance[2].magnitude()};
            },
            [](const Integrator1D& m) { return std::vector<double>{m.control.magnitude()}; },
            [](const Advection& m) {
                std::vector<double> alpha(m.velocity.size());
                std::transform(m.velocity.begin(), m.velocity.end(), alpha.begin(),
                               [](double v) { return std::abs(v); });
                return alpha;
            },
        },
        sys.model());
}

std::vector<double> dissipation_bounds(const SystemSpec& sys, const Grid& grid) {
    std::vector<Interval> region(grid.dims());
    for (std::size_t d = 0; d < grid.dims(); ++d) {
        region[d] = {grid.min(d), grid.max(d)};
    }
    return dissipation_bounds(sys, region);
}

}  // namespace hjr
