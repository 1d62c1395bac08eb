#pragma once

#include <cstddef>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hjr/contour.hpp"
#include "hjr/dynamics.hpp"
#include "hjr/solver.hpp"
#include "hjr/synthesis.hpp"

namespace hjr {

struct GridSpec {
    std::vector<double> mins;
    std::vector<double> maxs;
    std::vector<std::size_t> counts;
    std::vector<bool> periodic;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct SphereShape {
    std::vector<double> center;
    double radius = 1.0;
    friend bool operator==(const SphereShape&, const SphereShape&) = default;
};

struct CylinderShape {
    std::vector<std::size_t> ignore_dims;
    std::vector<double> center;
    double radius = 1.0;
    friend bool operator==(const CylinderShape&, const CylinderShape&) = default;
};

struct RectangleShape {
    std::vector<double> lower;
    std::vector<double> upper;
    friend bool operator==(const RectangleShape&, const RectangleShape&) = default;
};

using ShapeSpec = std::variant<SphereShape, CylinderShape, RectangleShape>;

[[nodiscard]] ValueField build_shape(std::shared_ptr<const Grid> grid, const ShapeSpec& shape);

struct TrajectorySpec {
    std::vector<State> initial_states;
    DisturbancePolicy disturbance = DisturbancePolicy::Worst;
    std::size_t substeps = 10;

    friend bool operator==(const TrajectorySpec&, const TrajectorySpec&) = default;
};

struct OutputSpec {
    bool field = true;
    bool csv = false;
    bool contours = true;
    /// Empty means the default slice: dims 0 and 1, others at their midpoints.
    std::vector<SliceSpec> slices;
    double level = 0.0;

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// A validated problem document.
struct ProblemConfig {
    SystemSpec system;
    GridSpec grid;
    ShapeSpec target;
    std::vector<ShapeSpec> obstacles;
    std::vector<double> tau;
    InputModes modes;
    MinWith min_with = MinWith::Tube;
    Direction direction = Direction::Backward;
    double cfl_factor = 0.5;
    std::size_t threads = 0;
    std::optional<TrajectorySpec> trajectory;
    OutputSpec outputs;

    friend bool operator==(const ProblemConfig&, const ProblemConfig&) = default;
};

enum class ReachGoal { Goal, Avoid };

/// Control mode for a goal-seeking or avoiding control in a forward or
/// backward problem; the disturbance takes the opposite mode by default.
[[nodiscard]] InputMode mode_for(ReachGoal goal, Direction direction) noexcept;

/// Parses and validates a JSON problem document. Throws ConfigError whose
/// message starts with the JSON pointer of the offending value.
[[nodiscard]] ProblemConfig parse_config(std::string_view text);
[[nodiscard]] ProblemConfig parse_config(std::istream& in);

/// Canonical JSON for a config, with every default and derived value spelled
/// out; parse_config(render_config(c)) == c.
[[nodiscard]] std::string render_config(const ProblemConfig& config);

[[nodiscard]] std::shared_ptr<const Grid> build_grid(const GridSpec& spec);

/// Builds the target and obstacle fields and packs the solver input.
[[nodiscard]] SolveConfig to_solve_config(const ProblemConfig& config);

/// Slices used for contour output: the configured ones or the default.
[[nodiscard]] std::vector<SliceSpec> effective_slices(const ProblemConfig& config);

}  // namespace hjr
