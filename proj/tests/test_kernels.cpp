#include <doctest.h>

#include <cmath>

#include "svwe/kernels.hpp"
#include "svwe/quadrature.hpp"

using namespace svwe;

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
// closed forms confirmed by the adaptive quadrature oracle
const double kC1 = 4.0 / (3.0 * M_PI) * (kSqrt3 * M_PI / 6.0 - 0.5 * std::log(2.0));
const double kC2 = std::log(2.0) / (3.0 * M_PI);
}  // namespace

TEST_CASE("multiplier limits at removable singularities") {
    const KernelFamily viscous = KernelFamily::viscous_wave();
    // sin(a)/a -> 1: the zero-frequency value is t
    CHECK(multiplier(viscous, KernelKind::VelocityPropagator, 0.7, 0.0) ==
          doctest::Approx(0.7).epsilon(1e-14));
    CHECK(multiplier(viscous, KernelKind::VelocityPropagator, 0.7, 1e-9) ==
          doctest::Approx(0.7).epsilon(1e-8));
    // Jhat_t(0) = 1
    CHECK(multiplier(viscous, KernelKind::DisplacementPropagator, 2.3, 0.0) == 1.0);
    // damped family at |xi| = c: sinh(a)/a -> 1 gives t e^{-ct}
    const KernelFamily damped = KernelFamily::damped_wave(1.5);
    CHECK(multiplier(damped, KernelKind::VelocityPropagator, 0.9, 1.5) ==
          doctest::Approx(0.9 * std::exp(-1.35)).epsilon(1e-12));
    CHECK(multiplier(damped, KernelKind::VelocityPropagator, 0.9, 1.5 + 1e-9) ==
          doctest::Approx(0.9 * std::exp(-1.35)).epsilon(1e-8));
    // heat multiplier e^{-|xi|^2 t}
    CHECK(multiplier(KernelFamily::heat(), KernelKind::VelocityPropagator, 1.0, 1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("displacement propagator is rejected outside the viscous family") {
    CHECK_THROWS_AS(multiplier(KernelFamily::heat(), KernelKind::DisplacementPropagator, 1.0, 1.0),
                    ConfigError);
    CHECK_THROWS_AS(multiplier(KernelFamily::wave(), KernelKind::DisplacementPropagator, 1.0, 1.0),
                    ConfigError);
}

TEST_CASE("spectral scaling relations hold on the mode lattice") {
    Grid g(1, 16.0, 256);
    const KernelFamily viscous = KernelFamily::viscous_wave();
    const KernelFamily wave = KernelFamily::wave();
    const KernelFamily heat = KernelFamily::heat();
    for (double t : {0.3, 1.0, 2.7}) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double rho = g.frequency_magnitude(i);
            // K-type: Khat_t(xi) = t Khat(t xi)
            const double kt = multiplier(viscous, KernelKind::VelocityPropagator, t, rho);
            const double unit = multiplier(viscous, KernelKind::VelocityPropagator, 1.0, t * rho);
            CHECK(std::abs(kt - t * unit) < 1e-10 * std::max(1.0, std::abs(kt)));
            const double wt = multiplier(wave, KernelKind::VelocityPropagator, t, rho);
            const double wu = multiplier(wave, KernelKind::VelocityPropagator, 1.0, t * rho);
            CHECK(std::abs(wt - t * wu) < 1e-10 * std::max(1.0, std::abs(wt)));
            // heat: Khat_t(xi) = Khat(sqrt(t) xi)
            const double ht = multiplier(heat, KernelKind::VelocityPropagator, t, rho);
            const double hu =
                multiplier(heat, KernelKind::VelocityPropagator, 1.0, std::sqrt(t) * rho);
            CHECK(std::abs(ht - hu) < 1e-12);
            // J-type: Jhat_t(xi) = Jhat(t xi)
            const double jt = multiplier(viscous, KernelKind::DisplacementPropagator, t, rho);
            const double ju = multiplier(viscous, KernelKind::DisplacementPropagator, 1.0, t * rho);
            CHECK(std::abs(jt - ju) < 1e-12);
        }
        CHECK(multiplier(viscous, KernelKind::VelocityPropagator, t, 0.0) ==
              doctest::Approx(t).epsilon(1e-12));
        CHECK(multiplier(wave, KernelKind::VelocityPropagator, t, 0.0) ==
              doctest::Approx(t).epsilon(1e-12));
        CHECK(multiplier(viscous, KernelKind::DisplacementPropagator, t, 0.0) == 1.0);
    }
}

TEST_CASE("wave kernel in n=1 is the half-box indicator away from the front") {
    Grid g(1, 8.0, 4096);
    const Field k = real_space_kernel(KernelFamily::wave(), KernelKind::VelocityPropagator, 0.5, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coordinate_magnitude(i);
        if (x < 0.4) CHECK(std::abs(k.values[i] - 0.5) < 0.02);  // Gibbs ripple interior
        if (x > 0.6 && x < 3.5) CHECK(std::abs(k.values[i]) < 0.02);
    }
}

TEST_CASE("heat kernel value at the origin") {
    Grid g(1, 32.0, 1024);
    const Field k = real_space_kernel(KernelFamily::heat(), KernelKind::VelocityPropagator, 1.0, g);
    const std::size_t origin = 512;  // x = 0
    CHECK(g.coordinate(512) == 0.0);
    CHECK(k.values[origin] == doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-6));
}

TEST_CASE("viscous kernel obeys its real-space scaling relation") {
    // K_2 sampled on [-32, 32) vs K(x/2) resampled: t^{1-n} = 1 in n = 1
    Grid coarse(1, 64.0, 2048);
    Grid half(1, 32.0, 2048);  // the points of `coarse` divided by two
    const KernelFamily fam = KernelFamily::viscous_wave();
    const Field k2 = real_space_kernel(fam, KernelKind::VelocityPropagator, 2.0, coarse);
    const Field ku = real_space_kernel(fam, KernelKind::VelocityPropagator, 1.0, half);
    // K_t(x) = t^{1-n} K(x/t), so in n = 1: K_2 at x_i equals K at x_i / 2,
    // which is the same index of the half-extent grid
    for (std::size_t i = 0; i < coarse.size(); ++i)
        CHECK(std::abs(k2.values[i] - ku.values[i]) < 1e-6);
}

TEST_CASE("insufficient resolution and non-function-valued requests are rejected") {
    Grid coarse(1, 32.0, 64);
    CHECK_THROWS_AS(
        real_space_kernel(KernelFamily::viscous_wave(), KernelKind::VelocityPropagator, 0.5, coarse),
        InsufficientResolution);
    Grid g3(3, 8.0, 16);
    CHECK_THROWS_AS(real_space_kernel(KernelFamily::wave(), KernelKind::VelocityPropagator, 1.0, g3),
                    NotFunctionValued);
}

TEST_CASE("resolution warnings flag unresolvable scales") {
    Grid g(1, 8.0, 64);
    CHECK(resolution_warnings(KernelFamily::wave(), 0.1, g).size() == 1);   // t < 4 dx
    CHECK(resolution_warnings(KernelFamily::wave(), 6.0, g).size() == 1);   // t > L/2
    CHECK(resolution_warnings(KernelFamily::wave(), 1.0, g).empty());
}

TEST_CASE("unit kernel L2 masses match their closed forms") {
    CHECK(unit_kernel_l2sq(KernelFamily::viscous_wave(), KernelKind::VelocityPropagator, 1) ==
          doctest::Approx(kC1).epsilon(1e-8));
    CHECK(unit_kernel_l2sq(KernelFamily::viscous_wave(), KernelKind::VelocityPropagator, 2) ==
          doctest::Approx(kC2).epsilon(1e-8));
    CHECK(unit_kernel_l2sq(KernelFamily::heat(), KernelKind::VelocityPropagator, 1) ==
          doctest::Approx(1.0 / std::sqrt(8.0 * M_PI)).epsilon(1e-8));
    CHECK(unit_kernel_l2sq(KernelFamily::wave(), KernelKind::VelocityPropagator, 1) ==
          doctest::Approx(0.5).epsilon(1e-6));
    CHECK_THROWS_AS(unit_kernel_l2sq(KernelFamily::wave(), KernelKind::VelocityPropagator, 2),
                    Error);
}

TEST_CASE("lq norms against oracles") {
    SUBCASE("wave n=1 t=1 q=2 equals sqrt(1/2)") {
        Grid g(1, 16.0, 8192);
        const double norm = lq_norm(KernelFamily::wave(), KernelKind::VelocityPropagator, 1.0, 2.0, g);
        CHECK(norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
    }
    SUBCASE("viscous unit kernel q=2 matches the Plancherel quadrature oracle") {
        Grid g(1, 64.0, 4096);
        const double norm =
            lq_norm(KernelFamily::viscous_wave(), KernelKind::VelocityPropagator, 1.0, 2.0, g);
        CHECK(norm == doctest::Approx(std::sqrt(kC1)).epsilon(5e-3));
    }
    SUBCASE("viscous q=2 norms scale like t^{2-n}") {
        Grid g(1, 64.0, 4096);
        const double n2 = lq_norm(KernelFamily::viscous_wave(), KernelKind::VelocityPropagator,
                                  2.0, 2.0, g);
        CHECK(n2 * n2 == doctest::Approx(2.0 * kC1).epsilon(0.005));
    }
    SUBCASE("viscous n=2 q=1 is stable under box doubling") {
        Grid small(2, 16.0, 256);
        Grid big(2, 32.0, 512);
        const KernelFamily fam = KernelFamily::viscous_wave();
        const double a = lq_norm(fam, KernelKind::VelocityPropagator, 1.0, 1.0, small);
        const double b = lq_norm(fam, KernelKind::VelocityPropagator, 1.0, 1.0, big);
        CHECK(b < a * 1.01);
        CHECK(b > a * 0.95);
    }
    SUBCASE("max norm and invalid q") {
        Grid g(1, 32.0, 1024);
        const double sup = lq_norm(KernelFamily::heat(), KernelKind::VelocityPropagator, 1.0, 0.0, g);
        CHECK(sup == doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-6));
        CHECK_THROWS_AS(lq_norm(KernelFamily::heat(), KernelKind::VelocityPropagator, 1.0, 0.5, g),
                        ConfigError);
    }
}

TEST_CASE("J decay fits beat the lemma bound") {
    SUBCASE("n=1, N_exp=2") {
        Grid g(1, 256.0, 16384);
        const JDecayReport rep = j_decay_check(g, 2);
        CHECK(rep.bound_exponent == doctest::Approx(-1.3));
        CHECK(rep.fitted_exponent <= -1.3);
        CHECK(rep.pass);
    }
    SUBCASE("n=2, N_exp=3") {
        Grid g(2, 64.0, 1024);
        const JDecayReport rep = j_decay_check(g, 3);
        CHECK(rep.bound_exponent == doctest::Approx(-1.0 - 2.0 * 2.0 / 3.0 + 0.2));
        CHECK(rep.fitted_exponent <= rep.bound_exponent);
        CHECK(rep.pass);
    }
    SUBCASE("degenerate window") {
        // resolved at Nyquist, but only four lattice points fall in [L/4, L/2)
        Grid g(1, 1.8, 8);
        CHECK_THROWS_AS(j_decay_check(g, 2), FitWindowEmpty);
    }
}

TEST_CASE("Poisson-wave factorization of the viscous kernel") {
    // fitted constant should sit at (2/sqrt(3)) * (2/pi): the inverse
    // transform of e^{-|xi| t/2} carries 2/pi in both dimensions and the
    // wave-kernel rescale contributes 2/sqrt(3)
    const double expected_c = 4.0 / (kSqrt3 * M_PI);
    SUBCASE("n=1") {
        Grid g(1, 64.0, 4096);
        const PoissonFactorizationReport rep = poisson_wave_factorization(1.0, g);
        CHECK(rep.multiplier_identity_max_err < 1e-12);
        CHECK(rep.relative_residual < 0.01);
        CHECK(rep.fitted_constant == doctest::Approx(expected_c).epsilon(0.02));
    }
    SUBCASE("n=2") {
        Grid g(2, 32.0, 512);
        const PoissonFactorizationReport rep = poisson_wave_factorization(1.0, g);
        CHECK(rep.multiplier_identity_max_err < 1e-12);
        CHECK(rep.relative_residual < 0.01);
        CHECK(rep.fitted_constant == doctest::Approx(expected_c).epsilon(0.02));
    }
}
