#pragma once

#include <complex>
#include <vector>

#include "svwe/errors.hpp"

namespace svwe {

// Fourier-space verification of the Stokes / membrane closure: the
// biharmonic velocity profile in the lower half space, its pressure Neumann
// data, and the Neumann-to-Dirichlet closure pi = -2 mu sqrt(-Delta) u_t.
// Everything here is symbolic-at-sample-points; the profile and all of its
// depth derivatives are closed forms.
struct StokesProfile {
    double xi_mag = 1.0;             // |xi| > 0
    std::complex<double> ut_hat{};   // membrane velocity coefficient
    double mu = 0.5;                 // fluid viscosity

    // vhat(x3) = ut_hat (1 - |xi| x3) e^{|xi| x3}, bounded for x3 <= 0
    std::complex<double> value(double x3) const;
    std::complex<double> d2(double x3) const;
    std::complex<double> d4(double x3) const;
};

// max |xi|^4 v - 2 |xi|^2 v'' + v'''' over the sample depths.
double biharmonic_residual(const StokesProfile& p, const std::vector<double>& x3_samples);

// d pi_hat / d x3 at the interface, mu (-|xi|^2 ut + v''(0)); asserts the
// closed form -2 mu |xi|^2 ut to 1e-12 relative.
std::complex<double> pressure_neumann(const StokesProfile& p);

// pi_hat(0) = pressure_neumann / |xi| = -2 mu |xi| ut. Throws DegenerateMode
// at xi = 0 where the Neumann-to-Dirichlet multiplier 1/|xi| is undefined.
std::complex<double> dtn_closure(const StokesProfile& p);

// Symbol of the membrane load per unit velocity coefficient: the coefficient
// of u_t in the per-mode membrane balance. With mu = 1/2 this equals -|xi|,
// matching the dissipative term the kernel family uses.
double dtn_symbol(double xi_mag, double mu);

}  // namespace svwe
