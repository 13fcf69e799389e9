#include <doctest.h>

#include <cmath>
#include <cstring>

#include "svwe/noise.hpp"
#include "svwe/stats.hpp"

using namespace svwe;

TEST_CASE("philox is a pure function of counter and key") {
    const auto a = philox4x32({1, 2, 3, 4}, {5, 6});
    const auto b = philox4x32({1, 2, 3, 4}, {5, 6});
    CHECK(a == b);
    CHECK(a != philox4x32({1, 2, 3, 5}, {5, 6}));
    CHECK(a != philox4x32({1, 2, 3, 4}, {5, 7}));
}

TEST_CASE("cell variance matches dt * dx^n") {
    // dt = 0.01, dx = 0.1: per-cell variance 1e-3 over 2^20 cells
    Grid g(1, 104857.6, 1 << 20);
    CHECK(g.dx() == doctest::Approx(0.1).epsilon(1e-12));
    const NoiseIncrement inc = sample_increment(g, 0.01, SeedPath{2024, 0, 0});
    RunningMoments m;
    for (double v : inc.values) m.add(v);
    const double target = 0.01 * g.dx();
    const double stderr_var = target * std::sqrt(2.0 / (g.size() - 1));
    CHECK(std::abs(m.mean()) < 4.0 * std::sqrt(target / g.size()));
    CHECK(std::abs(m.variance() - target) < 3.0 * stderr_var);
}

TEST_CASE("disjoint cells are uncorrelated") {
    Grid g(1, 6553.6, 1 << 16);
    const NoiseIncrement inc = sample_increment(g, 0.01, SeedPath{99, 3, 1});
    const NoiseIncrement other = sample_increment(g, 0.01, SeedPath{99, 4, 1});
    auto corr = [](const std::vector<double>& a, const std::vector<double>& b, int lag) {
        double num = 0, da = 0, db = 0;
        const std::size_t n = a.size() - lag;
        for (std::size_t i = 0; i < n; ++i) {
            num += a[i] * b[i + lag];
            da += a[i] * a[i];
            db += b[i + lag] * b[i + lag];
        }
        return num / std::sqrt(da * db);
    };
    const double bound = 4.0 / std::sqrt(static_cast<double>(g.size()));
    CHECK(std::abs(corr(inc.values, inc.values, 1)) < bound);  // across Box-Muller pairs
    CHECK(std::abs(corr(inc.values, inc.values, 2)) < bound);
    CHECK(std::abs(corr(inc.values, other.values, 0)) < bound);  // across steps
}

TEST_CASE("lattice rectangles are finitely additive") {
    Grid g(1, 8.0, 64);
    const NoiseIncrement inc = sample_increment(g, 0.1, SeedPath{5, 0, 0});
    auto mass = [&](int lo, int hi) {
        double acc = 0;
        for (int i = lo; i < hi; ++i) acc += inc.values[i];
        return acc;
    };
    // A = [8, 40), B = [24, 56): union minus intersection identity
    const double lhs = mass(8, 56);
    const double rhs = mass(8, 40) + mass(24, 56) - mass(24, 40);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("regeneration from the same seed path is bit identical") {
    Grid g(2, 4.0, 32);
    const NoiseIncrement a = sample_increment(g, 0.02, SeedPath{7, 11, 3});
    const NoiseIncrement b = sample_increment(g, 0.02, SeedPath{7, 11, 3});
    CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0);
    const NoiseIncrement c = sample_increment(g, 0.02, SeedPath{7, 11, 4});
    CHECK(std::memcmp(a.values.data(), c.values.data(), a.values.size() * sizeof(double)) != 0);
}

TEST_CASE("adaptedness protocol rejects illegal call orders") {
    Grid g(1, 4.0, 16);
    AdaptedNoiseSource source(g, 0.1, 1, 0);
    CHECK_THROWS_AS(source.draw_increment(), AdaptednessViolation);
    source.commit_integrand();
    CHECK_THROWS_AS(source.commit_integrand(), AdaptednessViolation);
    CHECK_NOTHROW(source.draw_increment());
    // requesting the next step's increment before committing its integrand
    CHECK_THROWS_AS(source.draw_increment(), AdaptednessViolation);
}

TEST_CASE("integrator accumulates f dW and zero integrand gives exactly zero") {
    Grid g(1, 1.0, 64);
    const auto zero = [&](int) { return Field(g, 0.0); };
    CHECK(stochastic_integral(g, 0.1, 10, zero, 31, 0) == 0.0);
    // one-step identity: I = sum f dW for committed f
    AdaptedIntegrator integ(g, 0.1, 31, 5);
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = 0.01 * static_cast<double>(i);
    integ.commit_integrand(f);
    const NoiseIncrement& inc = integ.draw_increment();
    double expect = 0;
    for (std::size_t i = 0; i < g.size(); ++i) expect += f.values[i] * inc.values[i];
    CHECK(integ.value() == doctest::Approx(expect).epsilon(1e-15));
}

TEST_SUITE("stat") {

TEST_CASE("unit-box integral is standard normal in law") {
    // f = 1 on [0,1] x [0,1]: lambda of the box is 1
    Grid g(1, 1.0, 64);
    const auto one = [&](int) { return Field(g, 1.0); };
    CHECK(step_integrand_l2sq(g, 0.1, 10, one) == doctest::Approx(1.0).epsilon(1e-12));
    RunningMoments m;
    const int reps = 20000;
    for (int r = 0; r < reps; ++r)
        m.add(stochastic_integral(g, 0.1, 10, one, 424242, static_cast<std::uint32_t>(r)));
    const double se_var = std::sqrt(2.0 / reps);
    CHECK(std::abs(m.mean()) < 4.0 / std::sqrt(static_cast<double>(reps)));
    CHECK(std::abs(m.variance() - 1.0) < 3.0 * se_var);
}

TEST_CASE("Ito isometry for a nonuniform deterministic integrand") {
    Grid g(1, 2.0, 128);
    const auto f = [&](int j) {
        Field out(g);
        for (int i = 0; i < 128; ++i)
            out.values[i] = 1.0 + 0.5 * std::cos(M_PI * g.coordinate(i)) + 0.1 * j;
        return out;
    };
    const double mass = step_integrand_l2sq(g, 0.05, 12, f);
    RunningMoments m;
    const int reps = 30000;
    for (int r = 0; r < reps; ++r)
        m.add(stochastic_integral(g, 0.05, 12, f, 777, static_cast<std::uint32_t>(r)));
    CHECK(std::abs(m.variance() - mass) < 3.0 * mass * std::sqrt(2.0 / reps));
}

TEST_CASE("BDG moments certify the Gaussian constants") {
    Grid g(1, 1.0, 64);
    const auto one = [&](int) { return Field(g, 1.0); };
    SUBCASE("p=2 is the isometry") {
        const BdgReport rep = bdg_moment_check(g, 0.1, 10, one, 2, 20000, 1001);
        CHECK(rep.exact == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.pass);
    }
    SUBCASE("p=4 on the unit box gives 3") {
        const BdgReport rep = bdg_moment_check(g, 0.1, 10, one, 4, 30000, 1002);
        CHECK(rep.exact == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(rep.pass);
        CHECK(rep.empirical == doctest::Approx(3.0).epsilon(0.05));
    }
    SUBCASE("p=4 with mass 2 gives 12") {
        const auto sqrt2 = [&](int) { return Field(g, std::sqrt(2.0)); };
        const BdgReport rep = bdg_moment_check(g, 0.1, 10, sqrt2, 4, 30000, 1003);
        CHECK(rep.exact == doctest::Approx(12.0).epsilon(1e-12));
        CHECK(rep.pass);
    }
    SUBCASE("odd p is rejected") {
        CHECK_THROWS_AS(bdg_moment_check(g, 0.1, 10, one, 3, 10, 1), ConfigError);
    }
}

TEST_CASE("smoothed functionals are refinement consistent") {
    // int phi dW for a fixed smooth phi has the same law when dx and dt halve
    const auto run = [](int n_cells, double dt, int steps, std::uint64_t seed) {
        Grid g(1, 8.0, n_cells);
        Field phi(g);
        for (int i = 0; i < n_cells; ++i) {
            const double x = g.coordinate(i);
            phi.values[i] = std::exp(-x * x);
        }
        const auto f = [&](int) { return phi; };
        RunningMoments m;
        for (int r = 0; r < 4000; ++r)
            m.add(stochastic_integral(g, dt, steps, f, seed, static_cast<std::uint32_t>(r)));
        return m;
    };
    const RunningMoments coarse = run(128, 0.1, 10, 51);
    const RunningMoments fine = run(256, 0.05, 20, 52);
    const double pooled = std::sqrt(2.0 / 4000.0) *
                          std::sqrt(coarse.variance() * coarse.variance() +
                                    fine.variance() * fine.variance());
    CHECK(std::abs(coarse.variance() - fine.variance()) < 4.0 * pooled);
}

}  // TEST_SUITE
