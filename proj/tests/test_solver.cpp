#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "hjr/error.hpp"
#include "hjr/oracle.hpp"
#include "hjr/solver.hpp"
#include "support.hpp"

using namespace hjr;
using namespace hjr::testing;

namespace {

constexpr double pi = std::numbers::pi;

const InputModes kMinMax{InputMode::Min, InputMode::Max};

bool bitwise_equal(const ValueField& a, const ValueField& b) {
    return a.size() == b.size() &&
           std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

std::shared_ptr<const Grid> torus(std::size_t n) {
    return std::make_shared<const Grid>(std::vector<double>{-2.0, -2.0, -pi},
                                        std::vector<double>{2.0, 2.0, pi},
                                        std::vector<std::size_t>{n, n, n},
                                        std::vector<bool>{true, true, true});
}

}  // namespace

TEST_CASE("Hamiltonian examples") {
    const SystemSpec car = make_dubins_car(1.0, {-1.0, 1.0});
    const State x{0.0, 0.0, 0.0};
    const State p{1.0, 0.0, 0.0};
    // Reference: minimum of p·f over a dense control sample.
    double ref = INFINITY;
    for (int i = 0; i <= 200; ++i) {
        const double u = -1.0 + 2.0 * i / 200.0;
        const State f = flow(car, x, std::vector<double>{u}, std::vector<double>{0, 0, 0});
        ref = std::min(ref, p[0] * f[0] + p[1] * f[1] + p[2] * f[2]);
    }
    CHECK(hamiltonian(car, 0.0, x, p, kMinMax) == doctest::Approx(ref).epsilon(1e-15));
    CHECK(hamiltonian(car, 0.0, x, p, kMinMax) == 1.0);

    CHECK(hamiltonian(car, 0.0, x, State{0.0, 0.0, 1.0}, kMinMax) == -1.0);
    CHECK(hamiltonian(make_advection({2.0}), 0.0, State{0.3}, State{0.5}, kMinMax) == 1.0);
    CHECK_THROWS_AS((void)hamiltonian(car, 0.0, x, State{1.0}, kMinMax), DimensionError);
}

TEST_CASE("Lax-Friedrichs numerical Hamiltonian examples") {
    const SystemSpec still = make_advection({0.0});
    const std::vector<double> one{1.0};
    CHECK(lf_numerical_hamiltonian(still, 0.0, State{0.0}, State{0.0}, State{2.0}, one, kMinMax) == -1.0);
    const SystemSpec adv = make_advection({1.0});
    CHECK(lf_numerical_hamiltonian(adv, 0.0, State{0.0}, State{1.0}, State{3.0}, one, kMinMax) == 1.0);
    // The horizon rate carries the opposite dissipation sign.
    CHECK(lf_horizon_rate(adv, 0.0, State{0.0}, State{1.0}, State{3.0}, one, kMinMax) == 3.0);
}

TEST_CASE("numerical Hamiltonian is consistent") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const SystemSpec car = make_dubins_car(1.0, {-1.0, 1.0}, {{{-0.1, 0.1}, {-0.2, 0.0}, {-0.1, 0.3}}});
    const std::vector<double> alpha{1.1, 1.2, 1.3};
    for (int trial = 0; trial < 5000; ++trial) {
        const State x{u(rng), u(rng), u(rng)};
        const State p{u(rng), u(rng), u(rng)};
        for (const InputModes modes : {kMinMax, InputModes{InputMode::Max, InputMode::Min}}) {
            const double h = hamiltonian(car, 0.0, x, p, modes);
            REQUIRE(std::abs(lf_numerical_hamiltonian(car, 0.0, x, p, p, alpha, modes) - h) <= 1e-12);
            REQUIRE(std::abs(lf_horizon_rate(car, 0.0, x, p, p, alpha, modes) - h) <= 1e-12);
        }
    }
}

TEST_CASE("CFL time step") {
    const std::vector<double> a3{1.1, 1.1, 1.1}, h3{0.2, 0.2, 0.2};
    CHECK(cfl_dt(a3, h3, 0.5, 10.0) == doctest::Approx(0.5 / 16.5).epsilon(1e-15));
    CHECK(cfl_dt(std::vector<double>{1.0}, std::vector<double>{0.25}, 0.5, 10.0) == 0.125);
    CHECK(cfl_dt(std::vector<double>{0.0, 0.0}, std::vector<double>{0.1, 0.1}, 0.5, 0.37) == 0.37);
}

TEST_CASE("Euler step examples") {
    const auto g = line_grid(-4.0, 4.0, 81);
    const ValueField linear = ValueField::sample(g, [](std::span<const double> x) { return 0.3 + 1.7 * x[0]; });

    const SystemSpec still = make_advection({0.0});
    const ValueField same = euler_step(linear, still, 0.0, 0.05, kMinMax, dissipation_bounds(still, *g));
    CHECK(same == linear);

    const double v = 0.8, dt = 0.05;
    const SystemSpec adv = make_advection({v});
    const ValueField moved = euler_step(linear, adv, 0.0, dt, kMinMax, dissipation_bounds(adv, *g));
    for (std::size_t i = 0; i < g->size(); ++i) {
        REQUIRE(moved[i] == doctest::Approx(linear[i] + dt * v * 1.7).epsilon(1e-13));
    }

    // Integrator with V = |x| − 1 at x = 2: evaluate the stencil by hand.
    const SystemSpec integ = make_integrator({-1.0, 1.0});
    const ValueField vabs = ValueField::sample(g, [](std::span<const double> x) { return std::abs(x[0]) - 1.0; });
    const std::size_t node = 60;
    REQUIRE(g->coordinate(0, node) == 2.0);
    const double h = g->spacing(0);
    const double pl = (vabs[node] - vabs[node - 1]) / h;
    const double pr = (vabs[node + 1] - vabs[node]) / h;
    const double pbar = 0.5 * (pl + pr);
    const double hbar = std::min(pbar * -1.0, pbar * 1.0);
    const double expected = vabs[node] + dt * (hbar + 1.0 * (pr - pl) / 2.0);
    const ValueField stepped = euler_step(vabs, integ, 0.0, dt, kMinMax, dissipation_bounds(integ, *g));
    CHECK(stepped[node] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(stepped[node] == doctest::Approx(vabs[node] - dt).epsilon(1e-14));
}

TEST_CASE("TVD-RK2 step") {
    const auto g = line_grid(-4.0, 4.0, 81);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n01;
    std::vector<double> vals(g->size());
    for (double& v : vals) v = n01(rng);
    const ValueField rough(g, vals);

    const SystemSpec still = make_advection({0.0});
    CHECK(tvd_rk2_step(rough, still, 0.0, 0.05, kMinMax, dissipation_bounds(still, *g)) == rough);

    const SystemSpec adv = make_advection({-0.6});
    const auto alpha = dissipation_bounds(adv, *g);
    const double dt = cfl_dt(alpha, g->spacings(), 0.5, 1.0);
    const ValueField linear = ValueField::sample(g, [](std::span<const double> x) { return 2.0 - 0.4 * x[0]; });
    const ValueField rk = tvd_rk2_step(linear, adv, 0.0, dt, kMinMax, alpha);
    const ValueField eu = euler_step(linear, adv, 0.0, dt, kMinMax, alpha);
    for (std::size_t i = 0; i < g->size(); ++i) {
        REQUIRE(rk[i] == doctest::Approx(eu[i]).epsilon(1e-13));
    }

    const SystemSpec integ = make_integrator({-1.0, 1.0});
    const auto ai = dissipation_bounds(integ, *g);
    const double dti = cfl_dt(ai, g->spacings(), 0.5, 1.0);
    const ValueField e1 = euler_step(rough, integ, 0.0, dti, kMinMax, ai);
    const ValueField e2 = euler_step(e1, integ, 0.0, dti, kMinMax, ai);
    const ValueField r2 = tvd_rk2_step(rough, integ, 0.0, dti, kMinMax, ai);
    for (std::size_t i = 0; i < g->size(); ++i) {
        REQUIRE(r2[i] == (rough[i] + e2[i]) / 2.0);
    }
}

TEST_CASE("min-with and obstacle masking") {
    const auto g = line_grid(0.0, 1.0, 3);
    const ValueField cand(g, {0.5, -0.7, 1.0});
    const ValueField prev(g, {-0.2, -0.2, 1.0});
    CHECK(apply_min_with(cand, prev) == ValueField(g, {-0.2, -0.7, 1.0}));

    const ValueField field(g, {-0.5, -0.5, 2.0});
    const ValueField obs(g, {-0.3, 1.0, -0.3});
    CHECK(apply_obstacles(field, obs) == ValueField(g, {0.3, -0.5, 2.0}));

    const ValueField other(line_grid(0.0, 2.0, 3), {0.0, 0.0, 0.0});
    CHECK_THROWS_AS((void)apply_min_with(cand, other), GridMismatchError);
    CHECK_THROWS_AS((void)apply_obstacles(cand, other), GridMismatchError);
}

TEST_CASE("zero horizon returns the masked target") {
    SolveConfig cfg = integrator_problem(41);
    cfg.tau = {0.0};
    const std::vector<double> lo{0.5}, hi{0.8};
    cfg.obstacles = shape_rectangle(cfg.target.grid_ptr(), lo, hi);
    const SolveResult r = solve(cfg);
    REQUIRE(r.fields.size() == 1);
    CHECK(bitwise_equal(r.fields[0], apply_obstacles(cfg.target, *cfg.obstacles)));
    CHECK(r.stats.steps == 0);
}

TEST_CASE("integrator reach tube matches the analytic interval and the oracle") {
    SolveConfig cfg = integrator_problem(201);
    cfg.tau = uniform_tau(1.0, 4);
    const SolveResult r = solve(cfg);
    const double h = cfg.grid().spacing(0);
    for (std::size_t k = 0; k < r.tau.size(); ++k) {
        const auto z = zero_crossings(r.fields[k]);
        REQUIRE(z.size() == 2);
        CHECK(std::abs(z[0] + 1.0 + r.tau[k]) <= 2 * h);
        CHECK(std::abs(z[1] - 1.0 - r.tau[k]) <= 2 * h);
    }

    const auto coarse = line_grid(-4.0, 4.0, 41);
    OracleConfig oc{coarse, cfg.system};
    oc.dt = 0.025;
    oc.steps = 40;
    const std::vector<double> lo{-1.0}, hi{1.0};
    const ValueField w = oracle_value(oc, shape_rectangle(coarse, lo, hi));
    const auto z = zero_crossings(r.fields.back());
    for (std::size_t i = 0; i < coarse->size(); ++i) {
        const State x{coarse->coordinate(0, i)};
        const bool solver_in = interpolate(r.fields.back(), x) <= 0.0;
        if (solver_in != (w[i] <= 0.0)) {
            const double dist = std::min(std::abs(x[0] - z[0]), std::abs(x[0] - z[1]));
            CHECK(dist <= 2 * coarse->spacing(0));
        }
    }
}

TEST_CASE("advection reachable set matches characteristics and the oracle") {
    const SolveResult r = solve(advection_problem(201));
    const double h = r.fields[0].grid().spacing(0);
    const auto z = zero_crossings(r.fields.back());
    REQUIRE(z.size() == 2);
    CHECK(std::abs(z[0] + 1.5) <= 2 * h);
    CHECK(std::abs(z[1] + 0.5) <= 2 * h);

    const auto coarse = line_grid(-3.0, 3.0, 61);
    OracleConfig oc{coarse, make_advection({1.0})};
    oc.dt = 0.05;
    oc.steps = 20;
    oc.tube = false;
    const std::vector<double> lo{-0.5}, hi{0.5};
    const ValueField w = oracle_value(oc, shape_rectangle(coarse, lo, hi));
    for (std::size_t i = 0; i < coarse->size(); ++i) {
        const State x{coarse->coordinate(0, i)};
        if ((interpolate(r.fields.back(), x) <= 0.0) != (w[i] <= 0.0)) {
            const double dist = std::min(std::abs(x[0] - z[0]), std::abs(x[0] - z[1]));
            CHECK(dist <= 2 * coarse->spacing(0));
        }
    }
}

TEST_CASE("two-dimensional advection agrees with the oracle") {
    const auto g = std::make_shared<const Grid>(std::vector<double>{-3.0, -3.0}, std::vector<double>{3.0, 3.0},
                                                std::vector<std::size_t>{61, 61},
                                                std::vector<bool>{false, false});
    const std::vector<double> c{0.5, -0.5};
    const SystemSpec sys = make_advection({0.8, -0.6});
    const ValueField target = shape_sphere(g, c, 1.0);
    const SolveResult r = solve(SolveConfig{sys, target, {0.0, 1.0}, kMinMax, MinWith::Tube});

    OracleConfig oc{g, sys};
    oc.dt = 0.05;
    oc.steps = 20;
    const ValueField w = oracle_value(oc, target);
    const double h = g->spacing(0);
    std::size_t disagreements = 0;
    State x(2);
    for (std::size_t i = 0; i < g->size(); ++i) {
        if ((r.fields.back()[i] <= 0.0) == (w[i] <= 0.0)) continue;
        ++disagreements;
        // Every disagreement must sit within two cells of the solver's zero level set.
        g->state_at_linear(i, x);
        bool near = false;
        for (int di = -2; di <= 2 && !near; ++di) {
            for (int dj = -2; dj <= 2 && !near; ++dj) {
                const State y{x[0] + di * h, x[1] + dj * h};
                if (!g->contains(y)) continue;
                near = (interpolate(r.fields.back(), y) <= 0.0) != (r.fields.back()[i] <= 0.0);
            }
        }
        CHECK(near);
    }
    MESSAGE("2-D advection disagreements: " << disagreements);
}

TEST_CASE("forward reachable set flows with the dynamics") {
    SolveConfig cfg = advection_problem(201);
    cfg.direction = Direction::Forward;
    const SolveResult r = solve(cfg);
    const auto z = zero_crossings(r.fields.back());
    REQUIRE(z.size() == 2);
    CHECK(std::abs(z[0] - 0.5) <= 0.06);
    CHECK(std::abs(z[1] - 1.5) <= 0.06);

    SolveConfig grow = integrator_problem(201);
    grow.direction = Direction::Forward;
    grow.modes = {InputMode::Max, InputMode::Min};
    const auto zg = zero_crossings(solve(grow).fields.back());
    REQUIRE(zg.size() == 2);
    CHECK(std::abs(zg[0] + 2.0) <= 0.08);
    CHECK(std::abs(zg[1] - 2.0) <= 0.08);
}

TEST_CASE("discrete max principle on periodic grids") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n01;
    const auto g = torus(15);
    std::vector<double> vals(g->size());
    for (double& v : vals) v = n01(rng);
    ValueField v(g, vals);
    const SystemSpec car = make_dubins_car(1.0, {-1.0, 1.0}, {{{-0.1, 0.1}, {-0.1, 0.1}, {-0.1, 0.1}}});
    const auto alpha = dissipation_bounds(car, *g);
    const double dt = cfl_dt(alpha, g->spacings(), 1.0, 1.0);
    for (int step = 0; step < 10; ++step) {
        const ValueField next = euler_step(v, car, 0.0, dt, kMinMax, alpha);
        const auto [lo, hi] = std::minmax_element(v.values().begin(), v.values().end());
        const auto [nlo, nhi] = std::minmax_element(next.values().begin(), next.values().end());
        CHECK(*nlo >= *lo - 1e-10);
        CHECK(*nhi <= *hi + 1e-10);
        const double m0 = std::max(std::abs(*lo), std::abs(*hi));
        const double m1 = std::max(std::abs(*nlo), std::abs(*nhi));
        CHECK(m1 <= m0 + 1e-10);
        v = next;
    }
}

TEST_CASE("tube is monotone and contains the target; set lies inside the tube") {
    SolveConfig tube = dubins_problem(5, 25);
    const SolveResult rt = solve(tube);
    for (std::size_t k = 1; k < rt.fields.size(); ++k) {
        for (std::size_t i = 0; i < rt.fields[k].size(); ++i) {
            REQUIRE(rt.fields[k][i] <= rt.fields[k - 1][i]);
            if (tube.target[i] <= 0.0) REQUIRE(rt.fields[k][i] <= 0.0);
        }
    }
    SolveConfig set = tube;
    set.min_with = MinWith::None;
    const SolveResult rs = solve(set);
    for (std::size_t k = 0; k < rs.fields.size(); ++k) {
        for (std::size_t i = 0; i < rs.fields[k].size(); ++i) {
            if (rs.fields[k][i] <= 0.0) REQUIRE(rt.fields[k][i] <= 0.0);
        }
    }
}

TEST_CASE("obstacle nodes stay outside at every output time") {
    SolveConfig cfg = dubins_problem(4, 25);
    const std::vector<double> lo{1.5, -1.0, -pi}, hi{2.5, 1.0, pi};
    cfg.obstacles = shape_rectangle(cfg.target.grid_ptr(), lo, hi);
    const SolveResult r = solve(cfg);
    for (const ValueField& f : r.fields) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            if ((*cfg.obstacles)[i] < 0.0) REQUIRE(f[i] > 0.0);
        }
    }
}

TEST_CASE("results are bit-identical across thread counts") {
    SolveConfig cfg = dubins_problem(3, 31);
    cfg.threads = 1;
    const SolveResult base = solve(cfg);
    for (const std::size_t threads : {2u, 3u, 8u}) {
        cfg.threads = threads;
        const SolveResult other = solve(cfg);
        REQUIRE(other.fields.size() == base.fields.size());
        CHECK(other.stats.dt_history == base.stats.dt_history);
        for (std::size_t k = 0; k < base.fields.size(); ++k) {
            CHECK(bitwise_equal(other.fields[k], base.fields[k]));
        }
    }
}

TEST_CASE("first-order convergence on curved initial data") {
    // Same transport problem as the interval target, with V0 = x² − 0.25 so the
    // crossings sit in curved data and the first-order error is not masked.
    double err[3];
    const std::size_t nodes[3] = {101, 201, 401};
    for (int i = 0; i < 3; ++i) {
        SolveConfig cfg = advection_problem(nodes[i]);
        cfg.target = ValueField::sample(cfg.target.grid_ptr(),
                                        [](std::span<const double> x) { return x[0] * x[0] - 0.25; });
        const auto z = zero_crossings(solve(cfg).fields.back());
        REQUIRE(z.size() == 2);
        err[i] = std::max(std::abs(z[0] + 1.5), std::abs(z[1] + 0.5));
    }
    CHECK(err[0] / err[1] >= 1.5);
    CHECK(err[0] / err[1] <= 2.5);
    CHECK(err[1] / err[2] >= 1.5);
    CHECK(err[1] / err[2] <= 2.5);
}

TEST_CASE("outputs land exactly on the requested times") {
    SolveConfig cfg = integrator_problem(41);
    cfg.tau = {0.0, 0.013, 0.5, 0.77, 1.0};
    const SolveResult r = solve(cfg);
    CHECK(r.tau == cfg.tau);
    CHECK(r.fields.size() == 5);
    double total = 0.0;
    for (const double dt : r.stats.dt_history) total += dt;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.stats.steps == r.stats.dt_history.size());
}

TEST_CASE("configuration validation") {
    SolveConfig cfg = integrator_problem(41);
    cfg.tau = {0.1, 0.5};
    CHECK_THROWS_WITH_AS((void)solve(cfg), "tau must start at 0", ArgumentError);
    cfg.tau = {0.0, 0.1, 0.05};
    CHECK_THROWS_WITH_AS((void)solve(cfg), "tau not strictly increasing", ArgumentError);
    cfg.tau = {0.0, 1.0};
    cfg.cfl_factor = 50.0;
    CHECK_THROWS_WITH_AS((void)solve(cfg), "cfl_factor must be in (0,1]", ArgumentError);
    cfg.cfl_factor = 0.0;
    CHECK_THROWS_AS((void)solve(cfg), ArgumentError);
    cfg.cfl_factor = 0.5;
    cfg.obstacles = ValueField(line_grid(-4.0, 4.0, 21), std::vector<double>(21, 1.0));
    CHECK_THROWS_AS((void)solve(cfg), GridMismatchError);
    cfg.obstacles.reset();
    cfg.system = make_advection({1.0, 1.0});
    CHECK_THROWS_AS((void)solve(cfg), DimensionError);
}

TEST_CASE("non-finite values abort with a diagnostic") {
    const auto g = line_grid(-1.0, 1.0, 21);
    std::vector<double> vals(21);
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = (i % 2 == 0 ? 1.0 : -1.0) * 1.5e308;
    const SolveConfig cfg{make_advection({1.0}), ValueField(g, vals), {0.0, 1.0}, kMinMax, MinWith::None};
    try {
        (void)solve(cfg);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("step") != std::string::npos);
        CHECK(msg.find("dt") != std::string::npos);
    }
}
