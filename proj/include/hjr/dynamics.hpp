#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "hjr/grid.hpp"

namespace hjr {

/// Whether an input minimizes or maximizes p·f.
enum class InputMode { Min, Max };

[[nodiscard]] constexpr InputMode opposite(InputMode m) noexcept {
    return m == InputMode::Min ? InputMode::Max : InputMode::Min;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double magnitude() const noexcept;
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// ẋ = [v cos θ + d₁, v sin θ + d₂, a + d₃], state (px, py, θ).
struct DubinsCar {
    double speed = 1.0;
    Interval turn_rate{-1.0, 1.0};
    std::array<Interval, 3> disturbance{};

    friend bool operator==(const DubinsCar&, const DubinsCar&) = default;
};

/// ẋ = u.
struct Integrator1D {
    Interval control{-1.0, 1.0};

    friend bool operator==(const Integrator1D&, const Integrator1D&) = default;
};

/// ẋ = velocity, no inputs.
struct Advection {
    std::vector<double> velocity;

    friend bool operator==(const Advection&, const Advection&) = default;
};

/**
 * A control-affine system with box-constrained control and disturbance.
 *
 * The optimal inputs for a costate are evaluated in closed form: each input
 * component enters the dynamics linearly, so the optimum over a box sits at a
 * box corner chosen by the sign of its coefficient in p·f. At a zero
 * coefficient every admissible value is optimal and the range minimum is
 * returned for both modes. New system kinds must keep this structure.
 */
class SystemSpec {
public:
    using Model = std::variant<DubinsCar, Integrator1D, Advection>;

    /// Throws ArgumentError when a range is inverted, speed is not positive,
    /// or a velocity is empty.
    explicit SystemSpec(Model model);

    [[nodiscard]] const Model& model() const noexcept { return model_; }

    [[nodiscard]] std::size_t state_dim() const noexcept;
    [[nodiscard]] std::size_t control_dim() const noexcept;
    [[nodiscard]] std::size_t disturbance_dim() const noexcept;

    [[nodiscard]] std::vector<Interval> control_bounds() const;
    [[nodiscard]] std::vector<Interval> disturbance_bounds() const;

    // Unchecked kernels: spans must already have the right lengths.
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const noexcept;
    void opt_ctrl_into(std::span<const double> p, InputMode mode,
                       std::span<double> out) const noexcept;
    void opt_dstb_into(std::span<const double> p, InputMode mode,
                       std::span<double> out) const noexcept;

    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

private:
    Model model_;
};

[[nodiscard]] SystemSpec make_dubins_car(double speed, Interval turn_rate,
                                         std::array<Interval, 3> disturbance = {});
[[nodiscard]] SystemSpec make_integrator(Interval control);
[[nodiscard]] SystemSpec make_advection(std::vector<double> velocity);

/// Right-hand side f(x, u, d). Throws DimensionError on length mismatch and
/// ArgumentError when u or d is outside its box.
[[nodiscard]] State flow(const SystemSpec& sys, std::span<const double> x,
                         std::span<const double> u, std::span<const double> d, double t = 0.0);

/// Control optimizing p·f per `mode`.
[[nodiscard]] std::vector<double> opt_ctrl(const SystemSpec& sys, double t,
                                           std::span<const double> x,
                                           std::span<const double> p, InputMode mode);

/// Disturbance optimizing p·f per `mode`.
[[nodiscard]] std::vector<double> opt_dstb(const SystemSpec& sys, double t,
                                           std::span<const double> x,
                                           std::span<const double> p, InputMode mode);

/// Upper bounds on |fᵢ| over the region and all admissible inputs. The bounds
/// are global closed forms, so the region only fixes the dimension.
[[nodiscard]] std::vector<double> dissipation_bounds(const SystemSpec& sys,
                                                     std::span<const Interval> region);

/// Same bounds over the whole grid.
[[nodiscard]] std::vector<double> dissipation_bounds(const SystemSpec& sys, const Grid& grid);

}  // namespace hjr
