#include "hjr/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hjr/error.hpp"

namespace hjr {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError((path.empty() ? std::string("/") : path) + ": " + message);
}

const char* type_name(const json& j) {
    return j.type_name();
}

// A JSON value together with its pointer, so every diagnostic can name it.
class Node {
public:
    Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

    [[nodiscard]] const json& value() const { return value_; }
    [[nodiscard]] const std::string& path() const { return path_; }

    [[nodiscard]] Node child(const std::string& key) const { return {value_.at(key), path_ + "/" + key}; }
    [[nodiscard]] Node element(std::size_t i) const {
        return {value_.at(i), path_ + "/" + std::to_string(i)};
    }

    [[nodiscard]] bool has(const std::string& key) const { return value_.contains(key); }

    [[nodiscard]] Node require(const std::string& key) const {
        if (!has(key)) {
            fail(path_, "missing required key \"" + key + "\"");
        }
        return child(key);
    }

    void expect_object(std::initializer_list<const char*> allowed) const {
        if (!value_.is_object()) {
            fail(path_, std::string("expected an object, got ") + type_name(value_));
        }
        for (const auto& [key, unused] : value_.items()) {
            (void)unused;
            const bool known = std::any_of(allowed.begin(), allowed.end(),
                                           [&](const char* a) { return key == a; });
            if (!known) {
                std::string list;
                for (const char* a : allowed) {
                    list += list.empty() ? "" : ", ";
                    list += a;
                }
                fail(path_ + "/" + key, "unknown key; expected one of {" + list + "}");
            }
        }
    }

    [[nodiscard]] double number() const {
        if (!value_.is_number()) {
            fail(path_, std::string("expected a number, got ") + type_name(value_));
        }
        const double v = value_.get<double>();
        if (!std::isfinite(v)) {
            fail(path_, "expected a finite number");
        }
        return v;
    }

    [[nodiscard]] std::size_t count() const {
        if (!value_.is_number_unsigned() && !(value_.is_number_integer() && value_.get<long long>() >= 0)) {
            fail(path_, std::string("expected a non-negative integer, got ") + value_.dump());
        }
        return value_.get<std::size_t>();
    }

    [[nodiscard]] bool boolean() const {
        if (!value_.is_boolean()) {
            fail(path_, std::string("expected true or false, got ") + type_name(value_));
        }
        return value_.get<bool>();
    }

    [[nodiscard]] std::string text() const {
        if (!value_.is_string()) {
            fail(path_, std::string("expected a string, got ") + type_name(value_));
        }
        return value_.get<std::string>();
    }

    [[nodiscard]] std::size_t array_size() const {
        if (!value_.is_array()) {
            fail(path_, std::string("expected an array, got ") + type_name(value_));
        }
        return value_.size();
    }

    [[nodiscard]] std::vector<double> numbers() const {
        std::vector<double> out(array_size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = element(i).number();
        }
        return out;
    }

    [[nodiscard]] std::vector<std::size_t> counts() const {
        std::vector<std::size_t> out(array_size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = element(i).count();
        }
        return out;
    }

    [[nodiscard]] Interval interval() const {
        const std::vector<double> v = numbers();
        if (v.size() != 2) {
            fail(path_, "expected [lo, hi]");
        }
        if (v[0] > v[1]) {
            fail(path_, "interval lower bound exceeds upper bound");
        }
        return {v[0], v[1]};
    }

    template <class E>
    [[nodiscard]] E choice(std::initializer_list<std::pair<const char*, E>> options) const {
        const std::string s = value_.is_string() ? value_.get<std::string>() : value_.dump();
        for (const auto& [name, e] : options) {
            if (s == name) {
                return e;
            }
        }
        std::string list;
        for (const auto& [name, e] : options) {
            (void)e;
            list += list.empty() ? "" : ", ";
            list += name;
        }
        fail(path_, "invalid value \"" + s + "\"; expected one of {" + list + "}");
    }

private:
    const json& value_;
    std::string path_;
};

SystemSpec parse_system(const Node& n) {
    const std::string type = n.require("type").text();
    if (type == "dubins_car") {
        n.expect_object({"type", "speed", "turn_rate", "disturbance"});
        DubinsCar car;
        if (n.has("speed")) {
            car.speed = n.child("speed").number();
            if (car.speed <= 0.0) {
                fail(n.path() + "/speed", "speed must be positive");
            }
        }
        if (n.has("turn_rate")) {
            car.turn_rate = n.child("turn_rate").interval();
        }
        if (n.has("disturbance")) {
            const Node d = n.child("disturbance");
            if (d.array_size() != 3) {
                fail(d.path(), "expected three intervals");
            }
            for (std::size_t i = 0; i < 3; ++i) {
                car.disturbance[i] = d.element(i).interval();
            }
        }
        return SystemSpec(car);
    }
    if (type == "integrator") {
        n.expect_object({"type", "control"});
        Integrator1D sys;
        if (n.has("control")) {
            sys.control = n.child("control").interval();
        }
        return SystemSpec(sys);
    }
    if (type == "advection") {
        n.expect_object({"type", "velocity"});
        Advection sys;
        sys.velocity = n.require("velocity").numbers();
        if (sys.velocity.empty()) {
            fail(n.path() + "/velocity", "velocity must not be empty");
        }
        return SystemSpec(sys);
    }
    fail(n.path() + "/type",
         "invalid value \"" + type + "\"; expected one of {dubins_car, integrator, advection}");
}

GridSpec parse_grid(const Node& n) {
    n.expect_object({"min", "max", "counts", "periodic"});
    GridSpec g;
    g.mins = n.require("min").numbers();
    g.maxs = n.require("max").numbers();
    g.counts = n.require("counts").counts();
    if (n.has("periodic")) {
        const Node p = n.child("periodic");
        g.periodic.resize(p.array_size());
        for (std::size_t i = 0; i < g.periodic.size(); ++i) {
            g.periodic[i] = p.element(i).boolean();
        }
    } else {
        g.periodic.assign(g.mins.size(), false);
    }
    const std::size_t dims = g.mins.size();
    if (g.maxs.size() != dims || g.counts.size() != dims || g.periodic.size() != dims) {
        fail(n.path(), "min, max, counts and periodic must have the same length (min has " +
                           std::to_string(dims) + ")");
    }
    try {
        (void)build_grid(g);
    } catch (const Error& e) {
        fail(n.path(), e.what());
    }
    return g;
}

ShapeSpec parse_shape(const Node& n, std::size_t dims) {
    const std::string type = n.require("type").text();
    if (type == "sphere") {
        n.expect_object({"type", "center", "radius"});
        SphereShape s{n.require("center").numbers(), n.require("radius").number()};
        if (s.center.size() != dims) {
            fail(n.path() + "/center", "expected " + std::to_string(dims) + " coordinates");
        }
        return s;
    }
    if (type == "cylinder") {
        n.expect_object({"type", "ignore_dims", "center", "radius"});
        CylinderShape c{n.require("ignore_dims").counts(), n.require("center").numbers(),
                        n.require("radius").number()};
        std::set<std::size_t> unique(c.ignore_dims.begin(), c.ignore_dims.end());
        if (unique.size() != c.ignore_dims.size() ||
            (!unique.empty() && *unique.rbegin() >= dims)) {
            fail(n.path() + "/ignore_dims", "dimensions must be distinct and below " +
                                                std::to_string(dims));
        }
        if (c.center.size() != dims - unique.size()) {
            fail(n.path() + "/center",
                 "expected " + std::to_string(dims - unique.size()) + " coordinates");
        }
        return c;
    }
    if (type == "rectangle") {
        n.expect_object({"type", "lower", "upper"});
        RectangleShape r{n.require("lower").numbers(), n.require("upper").numbers()};
        if (r.lower.size() != dims || r.upper.size() != dims) {
            fail(n.path(), "lower and upper need " + std::to_string(dims) + " coordinates");
        }
        for (std::size_t i = 0; i < dims; ++i) {
            if (r.lower[i] > r.upper[i]) {
                fail(n.path() + "/lower/" + std::to_string(i), "lower exceeds upper");
            }
        }
        return r;
    }
    fail(n.path() + "/type",
         "invalid value \"" + type + "\"; expected one of {sphere, cylinder, rectangle}");
}

std::vector<double> tau_from_horizon(double horizon, double interval) {
    std::vector<double> tau{0.0};
    const double steps = horizon / interval;
    const auto whole = static_cast<std::size_t>(std::floor(steps + 1e-9));
    for (std::size_t k = 1; k <= whole; ++k) {
        tau.push_back(static_cast<double>(k) * interval);
    }
    if (std::abs(tau.back() - horizon) <= 1e-9 * horizon) {
        tau.back() = horizon;
    } else {
        tau.push_back(horizon);
    }
    return tau;
}

void check_tau(const Node& n, const std::vector<double>& tau) {
    if (tau.size() < 2) {
        fail(n.path(), "tau needs at least two entries");
    }
    if (tau.front() != 0.0) {
        fail(n.path(), "tau must start at 0");
    }
    for (std::size_t k = 1; k < tau.size(); ++k) {
        if (!(tau[k] > tau[k - 1])) {
            fail(n.path(), "tau not strictly increasing");
        }
    }
}

SliceSpec parse_slice(const Node& n, const Grid& grid) {
    n.expect_object({"free_dims", "fixed"});
    SliceSpec s;
    const std::vector<std::size_t> free = n.require("free_dims").counts();
    if (free.size() != 2) {
        fail(n.path() + "/free_dims", "expected exactly two dimensions");
    }
    s.free_dims = {free[0], free[1]};
    if (n.has("fixed")) {
        s.fixed = n.child("fixed").numbers();
    }
    try {
        validate_slice(grid, s);
    } catch (const Error& e) {
        fail(n.path(), e.what());
    }
    return s;
}

const char* mode_name(InputMode m) { return m == InputMode::Min ? "min" : "max"; }

json shape_json(const ShapeSpec& shape) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SphereShape>) {
                return {{"type", "sphere"}, {"center", s.center}, {"radius", s.radius}};
            } else if constexpr (std::is_same_v<T, CylinderShape>) {
                return {{"type", "cylinder"},
                        {"ignore_dims", s.ignore_dims},
                        {"center", s.center},
                        {"radius", s.radius}};
            } else {
                return {{"type", "rectangle"}, {"lower", s.lower}, {"upper", s.upper}};
            }
        },
        shape);
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json system_json(const SystemSpec& sys) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DubinsCar>) {
                json d = json::array();
                for (const Interval& i : m.disturbance) {
                    d.push_back(interval_json(i));
                }
                return {{"type", "dubins_car"},
                        {"speed", m.speed},
                        {"turn_rate", interval_json(m.turn_rate)},
                        {"disturbance", d}};
            } else if constexpr (std::is_same_v<T, Integrator1D>) {
                return {{"type", "integrator"}, {"control", interval_json(m.control)}};
            } else {
                return {{"type", "advection"}, {"velocity", m.velocity}};
            }
        },
        sys.model());
}

ProblemConfig parse_document(const json& doc) {
    const Node root(doc, "");
    root.expect_object({"system", "grid", "target", "obstacles", "horizon", "output_interval",
                        "tau", "problem", "u_mode", "d_mode", "min_with", "direction",
                        "cfl_factor", "threads", "trajectory", "outputs"});

    const SystemSpec system = parse_system(root.require("system"));
    GridSpec grid_spec = parse_grid(root.require("grid"));
    const auto grid = build_grid(grid_spec);
    const std::size_t dims = grid->dims();
    if (system.state_dim() != dims) {
        fail("/system", "system has " + std::to_string(system.state_dim()) +
                            " states but the grid has " + std::to_string(dims) + " dimensions");
    }

    ProblemConfig cfg{system, std::move(grid_spec), parse_shape(root.require("target"), dims),
                      {}, {}, {}, MinWith::Tube, Direction::Backward, 0.5, 0, std::nullopt, {}};

    if (root.has("obstacles")) {
        const Node obs = root.child("obstacles");
        for (std::size_t i = 0; i < obs.array_size(); ++i) {
            cfg.obstacles.push_back(parse_shape(obs.element(i), dims));
        }
    }

    if (root.has("tau")) {
        if (root.has("horizon") || root.has("output_interval")) {
            fail("/tau", "give either tau or horizon/output_interval, not both");
        }
        const Node t = root.child("tau");
        cfg.tau = t.numbers();
        check_tau(t, cfg.tau);
    } else {
        const Node h = root.require("horizon");
        const double horizon = h.number();
        if (horizon <= 0.0) {
            fail(h.path(), "horizon must be positive");
        }
        double interval = horizon;
        if (root.has("output_interval")) {
            const Node iv = root.child("output_interval");
            interval = iv.number();
            if (interval <= 0.0 || interval > horizon) {
                fail(iv.path(), "output_interval must be in (0, horizon]");
            }
        }
        cfg.tau = tau_from_horizon(horizon, interval);
    }

    if (root.has("direction")) {
        cfg.direction = root.child("direction").choice<Direction>(
            {{"backward", Direction::Backward}, {"forward", Direction::Forward}});
    }
    std::optional<InputMode> u_mode;
    std::optional<InputMode> d_mode;
    if (root.has("problem")) {
        const ReachGoal goal = root.child("problem").choice<ReachGoal>(
            {{"goal", ReachGoal::Goal}, {"avoid", ReachGoal::Avoid}});
        u_mode = mode_for(goal, cfg.direction);
    }
    const std::initializer_list<std::pair<const char*, InputMode>> modes{
        {"min", InputMode::Min}, {"max", InputMode::Max}};
    if (root.has("u_mode")) {
        u_mode = root.child("u_mode").choice<InputMode>(modes);
    }
    if (root.has("d_mode")) {
        d_mode = root.child("d_mode").choice<InputMode>(modes);
    }
    if (!u_mode) {
        fail("/u_mode", "missing required key \"u_mode\" (or \"problem\")");
    }
    cfg.modes = {*u_mode, d_mode.value_or(opposite(*u_mode))};

    if (root.has("min_with")) {
        cfg.min_with = root.child("min_with").choice<MinWith>(
            {{"none", MinWith::None}, {"tube", MinWith::Tube}, {"zero", MinWith::Tube}});
    }
    if (root.has("cfl_factor")) {
        const Node c = root.child("cfl_factor");
        cfg.cfl_factor = c.number();
        if (!(cfg.cfl_factor > 0.0 && cfg.cfl_factor <= 1.0)) {
            fail(c.path(), "cfl_factor must be in (0,1]");
        }
    }
    if (root.has("threads")) {
        cfg.threads = root.child("threads").count();
    }

    if (root.has("trajectory")) {
        const Node t = root.child("trajectory");
        t.expect_object({"initial_states", "disturbance", "substeps"});
        TrajectorySpec spec;
        if (t.has("initial_states")) {
            const Node states = t.child("initial_states");
            for (std::size_t i = 0; i < states.array_size(); ++i) {
                const Node s = states.element(i);
                State x = s.numbers();
                if (x.size() != dims) {
                    fail(s.path(), "expected " + std::to_string(dims) + " coordinates");
                }
                if (!grid->contains(x)) {
                    fail(s.path(), "initial state outside the grid");
                }
                spec.initial_states.push_back(std::move(x));
            }
        }
        if (t.has("disturbance")) {
            spec.disturbance = t.child("disturbance").choice<DisturbancePolicy>(
                {{"worst", DisturbancePolicy::Worst}, {"zero", DisturbancePolicy::Zero}});
        }
        if (t.has("substeps")) {
            spec.substeps = t.child("substeps").count();
            if (spec.substeps == 0) {
                fail(t.path() + "/substeps", "substeps must be at least 1");
            }
        }
        cfg.trajectory = std::move(spec);
    }

    if (root.has("outputs")) {
        const Node o = root.child("outputs");
        o.expect_object({"formats", "slices", "level"});
        if (o.has("formats")) {
            const Node f = o.child("formats");
            cfg.outputs.field = cfg.outputs.csv = cfg.outputs.contours = false;
            for (std::size_t i = 0; i < f.array_size(); ++i) {
                const int which = f.element(i).choice<int>({{"field", 0}, {"csv", 1}, {"contours", 2}});
                (which == 0 ? cfg.outputs.field : which == 1 ? cfg.outputs.csv : cfg.outputs.contours) = true;
            }
        }
        if (o.has("slices")) {
            const Node s = o.child("slices");
            for (std::size_t i = 0; i < s.array_size(); ++i) {
                cfg.outputs.slices.push_back(parse_slice(s.element(i), *grid));
            }
        }
        if (o.has("level")) {
            cfg.outputs.level = o.child("level").number();
        }
    }
    return cfg;
}

}  // namespace

InputMode mode_for(ReachGoal goal, Direction direction) noexcept {
    const bool min = (goal == ReachGoal::Goal) == (direction == Direction::Backward);
    return min ? InputMode::Min : InputMode::Max;
}

std::shared_ptr<const Grid> build_grid(const GridSpec& spec) {
    return std::make_shared<const Grid>(spec.mins, spec.maxs, spec.counts, spec.periodic);
}

ValueField build_shape(std::shared_ptr<const Grid> grid, const ShapeSpec& shape) {
    return std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SphereShape>) {
                return shape_sphere(grid, s.center, s.radius);
            } else if constexpr (std::is_same_v<T, CylinderShape>) {
                return shape_cylinder(grid, s.ignore_dims, s.center, s.radius);
            } else {
                return shape_rectangle(grid, s.lower, s.upper);
            }
        },
        shape);
}

ProblemConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("syntax error: ") + e.what());
    }
    try {
        return parse_document(doc);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("/: ") + e.what());
    }
}

ProblemConfig parse_config(std::istream& in) {
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string render_config(const ProblemConfig& c) {
    json periodic = json::array();
    for (const bool p : c.grid.periodic) {
        periodic.push_back(p);
    }
    json obstacles = json::array();
    for (const ShapeSpec& s : c.obstacles) {
        obstacles.push_back(shape_json(s));
    }
    json formats = json::array();
    if (c.outputs.field) formats.push_back("field");
    if (c.outputs.csv) formats.push_back("csv");
    if (c.outputs.contours) formats.push_back("contours");
    json slices = json::array();
    for (const SliceSpec& s : c.outputs.slices) {
        slices.push_back({{"free_dims", {s.free_dims[0], s.free_dims[1]}}, {"fixed", s.fixed}});
    }

    json doc = {
        {"system", system_json(c.system)},
        {"grid",
         {{"min", c.grid.mins}, {"max", c.grid.maxs}, {"counts", c.grid.counts}, {"periodic", periodic}}},
        {"target", shape_json(c.target)},
        {"obstacles", obstacles},
        {"tau", c.tau},
        {"u_mode", mode_name(c.modes.control)},
        {"d_mode", mode_name(c.modes.disturbance)},
        {"min_with", c.min_with == MinWith::Tube ? "tube" : "none"},
        {"direction", c.direction == Direction::Backward ? "backward" : "forward"},
        {"cfl_factor", c.cfl_factor},
        {"threads", c.threads},
        {"outputs", {{"formats", formats}, {"slices", slices}, {"level", c.outputs.level}}},
    };
    if (c.trajectory) {
        doc["trajectory"] = {
            {"initial_states", c.trajectory->initial_states},
            {"disturbance", c.trajectory->disturbance == DisturbancePolicy::Worst ? "worst" : "zero"},
            {"substeps", c.trajectory->substeps}};
    }
    return doc.dump(2) + "\n";
}

SolveConfig to_solve_config(const ProblemConfig& c) {
    const auto grid = build_grid(c.grid);
    std::optional<ValueField> obstacles;
    for (const ShapeSpec& s : c.obstacles) {
        ValueField f = build_shape(grid, s);
        obstacles = obstacles ? field_union(*obstacles, f) : std::move(f);
    }
    return SolveConfig{c.system,     build_shape(grid, c.target), c.tau,
                       c.modes,      c.min_with,                  c.direction,
                       obstacles,    c.cfl_factor,                c.threads};
}

std::vector<SliceSpec> effective_slices(const ProblemConfig& c) {
    if (!c.outputs.slices.empty() || c.grid.mins.size() < 2) {
        return c.outputs.slices;
    }
    SliceSpec s;
    for (std::size_t d = 2; d < c.grid.mins.size(); ++d) {
        s.fixed.push_back(0.5 * (c.grid.mins[d] + c.grid.maxs[d]));
    }
    return {s};
}

}  // namespace hjr
