#include "hjr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "hjr/config.hpp"
#include "hjr/contour.hpp"
#include "hjr/error.hpp"
#include "hjr/field_io.hpp"
#include "hjr/solver.hpp"
#include "hjr/synthesis.hpp"

namespace hjr {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string output_dir = "./out";
    std::vector<std::string> emit;
    std::vector<std::string> traj;
    bool quiet = false;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    f << std::setprecision(std::numeric_limits<double>::max_digits10);
    return f;
}

void close_output(std::ofstream& f, const fs::path& path) {
    f.close();
    if (!f) {
        throw Error("failed writing " + path.string());
    }
}

State parse_state(const std::string& text) {
    State x;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
            throw ConfigError("--traj: cannot parse \"" + item + "\" as a number");
        }
        x.push_back(v);
    }
    if (x.empty()) {
        throw ConfigError("--traj: empty state");
    }
    return x;
}

void apply_overrides(const Options& opt, ProblemConfig& cfg) {
    if (!opt.emit.empty()) {
        cfg.outputs.field = cfg.outputs.csv = cfg.outputs.contours = false;
        for (const std::string& e : opt.emit) {
            (e == "field" ? cfg.outputs.field : e == "csv" ? cfg.outputs.csv : cfg.outputs.contours) =
                true;
        }
    }
    if (!opt.traj.empty()) {
        TrajectorySpec spec = cfg.trajectory.value_or(TrajectorySpec{});
        spec.initial_states.clear();
        const auto grid = build_grid(cfg.grid);
        for (const std::string& t : opt.traj) {
            State x = parse_state(t);
            if (x.size() != grid->dims()) {
                throw ConfigError("--traj: expected " + std::to_string(grid->dims()) +
                                  " coordinates, got " + std::to_string(x.size()));
            }
            if (!grid->contains(x)) {
                throw ConfigError("--traj: initial state outside the grid");
            }
            spec.initial_states.push_back(std::move(x));
        }
        cfg.trajectory = std::move(spec);
    }
}

void write_value_csv(const SolveResult& result, const fs::path& path) {
    std::ofstream f = open_output(path);
    const Grid& grid = result.fields.front().grid();
    f << "tau";
    for (std::size_t d = 0; d < grid.dims(); ++d) {
        f << ",x" << d;
    }
    f << ",value\n";
    State x(grid.dims());
    for (std::size_t k = 0; k < result.tau.size(); ++k) {
        const auto values = result.fields[k].values();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.state_at_linear(i, x);
            f << result.tau[k];
            for (const double c : x) {
                f << ',' << c;
            }
            f << ',' << values[i] << '\n';
        }
    }
    close_output(f, path);
}

std::size_t write_contours(const SolveResult& result, const SliceSpec& slice, double level,
                           const fs::path& path) {
    std::ofstream f = open_output(path);
    f << "tau,polyline_id,x,y\n";
    std::size_t total = 0;
    for (std::size_t k = 0; k < result.tau.size(); ++k) {
        const std::vector<Polyline> lines = extract_contours(result.fields[k], slice, level);
        for (std::size_t id = 0; id < lines.size(); ++id) {
            for (const auto& p : lines[id]) {
                f << result.tau[k] << ',' << id << ',' << p[0] << ',' << p[1] << '\n';
            }
        }
        total += lines.size();
    }
    close_output(f, path);
    return total;
}

void write_trajectory(const Trajectory& traj, const SystemSpec& sys, const fs::path& path) {
    std::ofstream f = open_output(path);
    f << 't';
    for (std::size_t d = 0; d < sys.state_dim(); ++d) {
        f << ",x" << d;
    }
    for (std::size_t d = 0; d < sys.control_dim(); ++d) {
        f << ",u" << d;
    }
    f << ",value\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        f << traj.times[i];
        for (const double c : traj.states[i]) {
            f << ',' << c;
        }
        // The last sample has no control applied after it.
        for (std::size_t d = 0; d < sys.control_dim(); ++d) {
            f << ',';
            if (i < traj.controls.size()) {
                f << traj.controls[i][d];
            }
        }
        f << ',' << traj.values[i] << '\n';
    }
    close_output(f, path);
}

int execute(const Options& opt, std::ostream& out) {
    std::ifstream in(opt.config);
    if (!in) {
        throw ConfigError("cannot open config file " + opt.config);
    }
    ProblemConfig cfg = parse_config(in);
    apply_overrides(opt, cfg);

    const fs::path dir(opt.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    }

    const SolveConfig solve_cfg = to_solve_config(cfg);
    const SolveResult result = solve(solve_cfg);
    if (!opt.quiet) {
        out << "solved " << result.tau.size() - 1 << " intervals in " << result.stats.steps
            << " steps (" << result.stats.wall_seconds << " s)\n";
    }

    std::ofstream manifest = open_output(dir / "manifest.txt");
    manifest << "# resolved config\n" << render_config(cfg);
    manifest << "# stats\n";
    manifest << "nodes " << solve_cfg.grid().size() << '\n';
    manifest << "steps " << result.stats.steps << '\n';
    if (!result.stats.dt_history.empty()) {
        const auto [lo, hi] = std::minmax_element(result.stats.dt_history.begin(),
                                                  result.stats.dt_history.end());
        manifest << "dt_min " << *lo << '\n' << "dt_max " << *hi << '\n';
    }
    manifest << "# files\n";

    if (cfg.outputs.field) {
        write_field_file(result, dir / "value.hjrf");
        manifest << "value.hjrf\n";
    }
    if (cfg.outputs.csv) {
        write_value_csv(result, dir / "value.csv");
        manifest << "value.csv\n";
    }
    if (cfg.outputs.contours) {
        const std::vector<SliceSpec> slices = effective_slices(cfg);
        for (std::size_t s = 0; s < slices.size(); ++s) {
            const std::string name = "contours_" + std::to_string(s) + ".csv";
            const std::size_t n = write_contours(result, slices[s], cfg.outputs.level, dir / name);
            manifest << name << " polylines " << n << '\n';
        }
    }
    if (cfg.trajectory) {
        for (std::size_t i = 0; i < cfg.trajectory->initial_states.size(); ++i) {
            const Trajectory traj =
                compute_trajectory(result, cfg.system, cfg.trajectory->initial_states[i],
                                   cfg.modes, cfg.trajectory->disturbance, cfg.trajectory->substeps);
            const std::string name = "trajectory_" + std::to_string(i) + ".csv";
            write_trajectory(traj, cfg.system, dir / name);
            manifest << name << ' ' << to_string(traj.outcome) << '\n';
        }
    }
    close_output(manifest, dir / "manifest.txt");
    if (!opt.quiet) {
        out << "wrote " << dir.string() << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Hamilton-Jacobi reachability solver", "hjreach"};
    app.add_option("--config", opt.config, "problem configuration (JSON)")->required();
    app.add_option("--output-dir", opt.output_dir, "directory for output files")
        ->capture_default_str();
    app.add_option("--emit", opt.emit, "output format; repeatable")
        ->check(CLI::IsMember({"field", "csv", "contours"}))
        ->take_all();
    app.add_option("--traj", opt.traj, "initial state \"x0,x1,...\"; repeatable")
        ->allow_extra_args(false);
    app.add_flag("--quiet", opt.quiet, "suppress progress output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitConfig;
    }

    try {
        return execute(opt, out);
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace hjr
