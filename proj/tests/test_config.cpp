#include <doctest.h>

#include <fstream>
#include <string>

#include "hjr/config.hpp"
#include "hjr/error.hpp"

using namespace hjr;

namespace {

const std::string kMinimal = R"({
  "system": {"type": "dubins_car"},
  "grid": {"min": [-5, -5, -3.141592653589793], "max": [5, 5, 3.141592653589793],
           "counts": [21, 21, 16], "periodic": [false, false, true]},
  "target": {"type": "cylinder", "ignore_dims": [2], "center": [0, 0], "radius": 1},
  "horizon": 1.0,
  "u_mode": "min"
})";

std::string with(const std::string& extra) {
    std::string s = kMinimal;
    s.insert(s.rfind('}'), "," + extra);
    return s;
}

std::string error_of(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal document picks the defaults") {
    const ProblemConfig c = parse_config(kMinimal);
    CHECK(c.tau == std::vector<double>{0.0, 1.0});
    CHECK(c.modes.control == InputMode::Min);
    CHECK(c.modes.disturbance == InputMode::Max);
    CHECK(c.min_with == MinWith::Tube);
    CHECK(c.direction == Direction::Backward);
    CHECK(c.cfl_factor == 0.5);
    CHECK(c.obstacles.empty());
    CHECK_FALSE(c.trajectory.has_value());
    CHECK(c.outputs.field);
    CHECK(c.outputs.contours);
    CHECK_FALSE(c.outputs.csv);
    const auto slices = effective_slices(c);
    REQUIRE(slices.size() == 1);
    CHECK(slices[0].free_dims == std::array<std::size_t, 2>{0, 1});
    REQUIRE(slices[0].fixed.size() == 1);
}

TEST_CASE("horizon and interval expand to a tau list") {
    CHECK(parse_config(with(R"("output_interval": 0.25)")).tau ==
          std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto tau = parse_config(with(R"("output_interval": 0.4)")).tau;
    REQUIRE(tau.size() == 4);
    CHECK(tau[2] == doctest::Approx(0.8));
    CHECK(tau.back() == 1.0);
}

TEST_CASE("mode table for goal and avoid problems") {
    CHECK(mode_for(ReachGoal::Goal, Direction::Backward) == InputMode::Min);
    CHECK(mode_for(ReachGoal::Avoid, Direction::Backward) == InputMode::Max);
    CHECK(mode_for(ReachGoal::Goal, Direction::Forward) == InputMode::Max);
    CHECK(mode_for(ReachGoal::Avoid, Direction::Forward) == InputMode::Min);

    std::string doc = kMinimal;
    doc.replace(doc.find(R"("u_mode": "min")"), 15, R"("problem": "avoid")");
    const ProblemConfig c = parse_config(doc);
    CHECK(c.modes.control == InputMode::Max);
    CHECK(c.modes.disturbance == InputMode::Min);
}

TEST_CASE("errors name the offending path and the valid choices") {
    std::string doc = kMinimal;
    doc.replace(doc.find(R"("u_mode": "min")"), 15, R"("u_mode": "minimize")");
    const std::string e = error_of(doc);
    CHECK(e.find("/u_mode") == 0);
    CHECK(e.find("minimize") != std::string::npos);
    CHECK(e.find("{min, max}") != std::string::npos);

    CHECK(error_of(with(R"("cfl_factor": 50)")) == "/cfl_factor: cfl_factor must be in (0,1]");
    CHECK(error_of(with(R"("colour": "red")")).find("/colour: unknown key") == 0);
    CHECK(error_of(with(R"("trajectory": {"substeps": 0})")).find("/trajectory/substeps") == 0);
    CHECK(error_of(with(R"("min_with": "always")")).find("{none, tube, zero}") != std::string::npos);
    CHECK(error_of("{").find("syntax error") == 0);
    CHECK(error_of("[]").find("/:") == 0);
}

TEST_CASE("tau must be increasing and start at zero") {
    std::string doc = kMinimal;
    doc.replace(doc.find(R"("horizon": 1.0)"), 14, R"("tau": [0, 0.1, 0.05])");
    CHECK(error_of(doc) == "/tau: tau not strictly increasing");
    doc.replace(doc.find("[0, 0.1, 0.05]"), 14, "[0.1, 0.2]");
    CHECK(error_of(doc) == "/tau: tau must start at 0");
    CHECK(error_of(with(R"("tau": [0, 1])")).find("either tau or horizon") != std::string::npos);
}

TEST_CASE("grid and shape consistency") {
    std::string doc = kMinimal;
    doc.replace(doc.find("[false, false, true]"), 20, "[false, true]");
    CHECK(error_of(doc).find("/grid: min, max, counts and periodic must have the same length") == 0);

    doc = kMinimal;
    doc.replace(doc.find(R"("center": [0, 0])"), 16, R"("center": [0])");
    CHECK(error_of(doc).find("/target/center") == 0);

    doc = kMinimal;
    doc.replace(doc.find(R"("type": "dubins_car")"), 20, R"("type": "integrator")");
    CHECK(error_of(doc).find("/system: system has 1 states") == 0);

    CHECK(error_of(with(R"("trajectory": {"initial_states": [[9, 0, 0]]})"))
              .find("/trajectory/initial_states/0") == 0);
    CHECK(error_of(with(R"("outputs": {"slices": [{"free_dims": [0, 0], "fixed": [0]}]})"))
              .find("/outputs/slices/0") == 0);
}

TEST_CASE("zero is an alias for tube") {
    CHECK(parse_config(with(R"("min_with": "zero")")).min_with == MinWith::Tube);
    CHECK(parse_config(with(R"("min_with": "none")")).min_with == MinWith::None);
    CHECK(render_config(parse_config(with(R"("min_with": "zero")"))).find(R"("min_with": "tube")") !=
          std::string::npos);
}

TEST_CASE("render then parse is the identity") {
    const std::string full = with(R"("output_interval": 0.3,
        "obstacles": [{"type": "rectangle", "lower": [1, 1, -1], "upper": [2, 2, 1]},
                      {"type": "sphere", "center": [-2, -2, 0], "radius": 0.5}],
        "direction": "forward", "d_mode": "min", "cfl_factor": 0.8, "threads": 2,
        "trajectory": {"initial_states": [[1, 2, 0.5]], "disturbance": "zero", "substeps": 4},
        "outputs": {"formats": ["csv"], "slices": [{"free_dims": [0, 2], "fixed": [0.25]}], "level": 0.1})");
    const ProblemConfig c = parse_config(full);
    CHECK(parse_config(render_config(c)) == c);
    CHECK(render_config(parse_config(render_config(c))) == render_config(c));
    const ProblemConfig m = parse_config(kMinimal);
    CHECK(parse_config(render_config(m)) == m);
}

TEST_CASE("shipped example configs parse") {
    for (const char* name : {"dubins_quickstart.json", "integrator.json", "advection_obstacle.json"}) {
        std::ifstream in(std::string(HJREACH_CONFIG_DIR) + "/" + name);
        REQUIRE(in.good());
        const ProblemConfig c = parse_config(in);
        CHECK_NOTHROW((void)to_solve_config(c));
    }
}
