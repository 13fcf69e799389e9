#include <doctest.h>

#include <cmath>
#include <cstring>

#include "svwe/analysis.hpp"
#include "svwe/fft.hpp"
#include "svwe/solver.hpp"

using namespace svwe;

namespace {
constexpr double kSqrt3 = 1.7320508075688772;

SimConfig small_config() {
    SimConfig cfg;
    cfg.dim = 1;
    cfg.extent = 16.0;
    cfg.points_per_axis = 128;
    cfg.dt = 0.01;
    cfg.horizon = 0.5;
    cfg.f = Nonlinearity::one();
    cfg.replicates = 4;
    cfg.seed = 9;
    cfg.observe_times = {0.25, 0.5};
    return cfg;
}
}  // namespace

TEST_CASE("nonlinearity presets parse and spot-check") {
    CHECK(Nonlinearity::parse("zero").is_constant());
    CHECK(Nonlinearity::parse("one").constant_value() == 1.0);
    CHECK(Nonlinearity::parse("sin")(1.0) == doctest::Approx(std::sin(1.0)));
    const Nonlinearity aff = Nonlinearity::parse("affine(2,-0.5)");
    CHECK(aff(2.0) == doctest::Approx(1.0));
    CHECK_NOTHROW(aff.spot_check());
    CHECK_THROWS_AS(Nonlinearity::parse("cube"), ConfigError);
    // a declared bound the function violates is caught by the spot check
    const Nonlinearity bad = Nonlinearity::custom("square", [](double u) { return u * u; }, 1.0);
    CHECK_THROWS_AS(bad.spot_check(), ConfigError);
}

TEST_CASE("deterministic propagator reproduces the per-mode closed forms") {
    Grid g(1, 16.0, 256);
    const int mode = 3;
    const double rho = 2.0 * M_PI * mode / 16.0;
    Field zero(g);
    Field cosine(g);
    for (int j = 0; j < 256; ++j)
        cosine.values[j] = std::cos(rho * g.coordinate(j));

    SUBCASE("zero data stays zero") {
        const Field u = propagate_deterministic({zero, zero}, 1.7);
        for (double v : u.values) CHECK(std::abs(v) < 1e-14);
    }
    SUBCASE("t = 0 returns g exactly") {
        const Field u = propagate_deterministic({cosine, zero}, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(u.values[i] == cosine.values[i]);
    }
    SUBCASE("velocity mode evolves by the K multiplier") {
        for (double t : {0.3, 1.0}) {
            const Field u = propagate_deterministic({zero, cosine}, t);
            const double omega = 0.5 * kSqrt3 * rho;
            const double coeff = std::exp(-0.5 * rho * t) * std::sin(omega * t) / omega;
            for (std::size_t i = 0; i < g.size(); ++i)
                CHECK(std::abs(u.values[i] - coeff * cosine.values[i]) < 1e-10);
        }
    }
    SUBCASE("displacement mode evolves by the J multiplier") {
        for (double t : {0.3, 1.0}) {
            const Field u = propagate_deterministic({cosine, zero}, t);
            const double a = 0.5 * kSqrt3 * rho * t;
            const double coeff = std::exp(-0.5 * rho * t) * (std::cos(a) + std::sin(a) / kSqrt3);
            for (std::size_t i = 0; i < g.size(); ++i)
                CHECK(std::abs(u.values[i] - coeff * cosine.values[i]) < 1e-10);
        }
    }
    SUBCASE("constant forcing accumulates by left-endpoint quadrature") {
        SampledForcing forcing;
        forcing.dt = 0.05;
        for (int j = 0; j < 20; ++j) forcing.samples.emplace_back(g, 1.0);
        const double t = 1.0;
        const Field u = propagate_deterministic({zero, zero}, t, &forcing);
        double expect = 0.0;
        for (int j = 0; j < 20; ++j) expect += (t - j * forcing.dt) * forcing.dt;
        for (double v : u.values) CHECK(v == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("stochastic step with f = 0 matches the deterministic flow for any dt") {
    Grid g(1, 16.0, 128);
    Field gauss(g);
    for (int j = 0; j < 128; ++j) {
        const double x = g.coordinate(j);
        gauss.values[j] = std::exp(-x * x);
    }
    const InitialData data{gauss, Field(g)};
    const Field direct = propagate_deterministic(data, 0.5);
    for (double dt : {0.5, 0.1, 0.01}) {
        SolverState state = SolverState::from_initial_data(data);
        AdaptedNoiseSource source(g, dt, 17, 0);
        const int steps = static_cast<int>(std::llround(0.5 / dt));
        for (int j = 0; j < steps; ++j) {
            source.commit_integrand();
            state = step_stochastic(state, dt, Nonlinearity::zero(), source.draw_increment());
        }
        const Field u = state.displacement();
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(std::abs(u.values[i] - direct.values[i]) < 1e-12);
    }
}

TEST_CASE("non-finite coefficients raise NonFiniteState") {
    Grid g(1, 8.0, 16);
    SolverState s;
    s.grid = g;
    s.u_hat.assign(g.size(), cplx{0.0, 0.0});
    s.v_hat.assign(g.size(), cplx{0.0, 0.0});
    CHECK_NOTHROW(s.check_finite());
    s.u_hat[3] = cplx{std::numeric_limits<double>::infinity(), 0.0};
    CHECK_THROWS_AS(s.check_finite(), NonFiniteState);
}

TEST_CASE("configuration validation names the offending field") {
    SimConfig cfg = small_config();
    cfg.dim = 3;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("(n)"), ConfigError);
    cfg = small_config();
    cfg.points_per_axis = 100;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("(N)"), ConfigError);
    cfg = small_config();
    cfg.observe_times = {2.0};
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("(observe_times)"), ConfigError);
}

TEST_CASE("ensembles are deterministic and reproducible") {
    const SimConfig cfg = small_config();
    const TrajectoryEnsemble a = run_ensemble(cfg);
    const TrajectoryEnsemble b = run_ensemble(cfg);
    for (int r = 0; r < cfg.replicates; ++r)
        for (std::size_t ti = 0; ti < a.times.size(); ++ti)
            CHECK(std::memcmp(a.snapshot(r, ti).data(), b.snapshot(r, ti).data(),
                              a.snapshot(r, ti).size() * sizeof(double)) == 0);
    // distinct replicates distinct paths
    CHECK(std::memcmp(a.snapshot(0, 0).data(), a.snapshot(1, 0).data(),
                      a.snapshot(0, 0).size() * sizeof(double)) != 0);
}

TEST_CASE("deterministic ensemble has zero variance") {
    SimConfig cfg = small_config();
    cfg.f = Nonlinearity::zero();
    cfg.g_preset = "gaussian(1)";
    cfg.replicates = 8;
    const TrajectoryEnsemble ens = run_ensemble(cfg);
    for (int r = 1; r < cfg.replicates; ++r)
        for (std::size_t i = 0; i < ens.snapshot(0, 0).size(); ++i)
            CHECK(ens.snapshot(r, 0)[i] == ens.snapshot(0, 0)[i]);
}

TEST_CASE("snapshot storage guard rejects oversize ensembles") {
    SimConfig cfg = small_config();
    cfg.replicates = 1000000;
    CHECK_THROWS_AS(run_ensemble(cfg, /*max_bytes=*/1 << 20), ConfigError);
}

TEST_CASE("picard iterates collapse for decoupled nonlinearities") {
    SimConfig cfg = small_config();
    cfg.g_preset = "gaussian(1)";
    cfg.replicates = 3;
    SUBCASE("f = 0: every iterate equals u_0") {
        cfg.f = Nonlinearity::zero();
        const PicardReport rep = picard_iterate(cfg, 3);
        for (double h2 : rep.h2) CHECK(h2 == 0.0);
    }
    SUBCASE("f = 1: the first iterate is already the fixed point") {
        cfg.f = Nonlinearity::one();
        const PicardReport rep = picard_iterate(cfg, 4);
        CHECK(rep.h2[0] > 0.0);
        for (std::size_t k = 1; k < rep.h2.size(); ++k) CHECK(rep.h2[k] == 0.0);
    }
}

TEST_CASE("lattice additive variance approaches the continuum law") {
    const double c1 = 4.0 / (3.0 * M_PI) * (kSqrt3 * M_PI / 6.0 - 0.5 * std::log(2.0));
    Grid g(1, 32.0, 512);
    const double lat = lattice_additive_variance(g, 0.005, 1.0);
    CHECK(lat == doctest::Approx(c1 / 2.0).epsilon(0.015));
    // increment infrastructure is internally consistent: zero lag, symmetry
    CHECK(lattice_time_increment_variance(g, 0.005, 0.5, 0.5) == 0.0);
    CHECK(lattice_time_increment_variance(g, 0.005, 0.5, 0.75) ==
          doctest::Approx(lattice_time_increment_variance(g, 0.005, 0.75, 0.5)).epsilon(1e-12));
    CHECK(lattice_space_increment_variance(g, 0.005, 0.5, 0.0) == 0.0);
}

TEST_SUITE("stat") {

TEST_CASE("additive-noise variance matches the per-mode oracle and the continuum law") {
    SimConfig cfg;
    cfg.dim = 1;
    cfg.extent = 32.0;
    cfg.points_per_axis = 256;
    cfg.dt = 0.01;
    cfg.horizon = 0.5;
    cfg.f = Nonlinearity::one();
    cfg.replicates = 600;
    cfg.seed = 20240601;
    cfg.observe_times = {0.5};
    const Grid grid = cfg.grid();

    double sum2 = 0.0;
    std::int64_t count = 0;
    for_each_replicate(cfg, [&](int, const std::vector<std::vector<double>>& snaps) {
        double local = 0.0;
        for (double v : snaps[0]) local += v * v;
#pragma omp critical
        {
            sum2 += local;
            count += static_cast<std::int64_t>(snaps[0].size());
        }
    });
    const double mc = sum2 / count;
    const double oracle = lattice_additive_variance(grid, cfg.dt, 0.5);
    // ~ 600 x (L / t) effective samples -> ~1% relative error at 1 sigma
    CHECK(mc == doctest::Approx(oracle).epsilon(0.04));
    const double c1 = 4.0 / (3.0 * M_PI) * (kSqrt3 * M_PI / 6.0 - 0.5 * std::log(2.0));
    CHECK(mc == doctest::Approx(c1 * 0.25 / 2.0).epsilon(0.05));
}

TEST_CASE("picard gaps decay superexponentially for f = sin") {
    SimConfig cfg;
    cfg.dim = 1;
    cfg.extent = 16.0;
    cfg.points_per_axis = 128;
    cfg.dt = 0.01;
    cfg.horizon = 1.0;
    cfg.f = Nonlinearity::sine();
    cfg.g_preset = "gaussian(1)";
    cfg.replicates = 64;
    cfg.seed = 4242;
    cfg.observe_times = {1.0};
    const PicardReport rep = picard_iterate(cfg, 5);
    REQUIRE(rep.h2.size() == 5);
    CHECK(rep.h2[0] > 0.0);
    for (int k = 1; k < 5; ++k) {
        CHECK(rep.h2[k] < 0.5 * rep.h2[k - 1]);
        CHECK(rep.h2[k] <= rep.envelope[k] * 1.5);
    }
}

TEST_CASE("isometry holds for solver-produced adapted integrands") {
    // I = sum_j sum_cells sin(u(t_j)) dW_j with the very increments that
    // drive u: E[I^2] must equal E[int int sin(u)^2] across seeds
    Grid g(1, 8.0, 64);
    const double dt = 0.02;
    const int steps = 25;
    const Nonlinearity f = Nonlinearity::sine();
    Field gauss(g);
    for (int j = 0; j < 64; ++j) {
        const double x = g.coordinate(j);
        gauss.values[j] = std::exp(-x * x);
    }
    RunningMoments integral_m, mass_m;
    for (std::uint32_t rep = 0; rep < 64; ++rep) {
        SolverState state = SolverState::from_initial_data({gauss, Field(g)});
        AdaptedIntegrator integ(g, dt, 6060, rep);
        double mass = 0.0;
        for (int j = 0; j < steps; ++j) {
            const Field u = state.displacement();
            Field fu(g);
            for (std::size_t i = 0; i < g.size(); ++i) fu.values[i] = f(u.values[i]);
            for (double v : fu.values) mass += v * v * dt * g.cell_volume();
            integ.commit_integrand(fu);
            state = step_stochastic(state, dt, f, integ.draw_increment());
        }
        integral_m.add(integ.value());
        mass_m.add(mass);
    }
    const double var = integral_m.variance();
    const double mass = mass_m.mean();
    // stderr of a variance estimate over 64 seeds
    const double se = var * std::sqrt(2.0 / 63.0);
    CHECK(std::abs(var - mass) <= 4.0 * se);
}

TEST_CASE("no blow-up for f = sin over a long horizon across seeds") {
    SimConfig cfg;
    cfg.dim = 1;
    cfg.extent = 16.0;
    cfg.points_per_axis = 128;
    cfg.dt = 0.02;
    cfg.horizon = 4.0;
    cfg.f = Nonlinearity::sine();
    cfg.g_preset = "gaussian(1)";
    cfg.replicates = 64;
    cfg.seed = 31337;
    cfg.observe_times = {4.0};
    double sup = 0.0;
    CHECK_NOTHROW(for_each_replicate(cfg, [&](int, const std::vector<std::vector<double>>& snaps) {
        double local = 0.0;
        for (double v : snaps[0]) local = std::max(local, std::abs(v));
#pragma omp critical
        sup = std::max(sup, local);
    }));
    CHECK(sup < 100.0);
    CHECK(sup > 0.0);
}

}  // TEST_SUITE
