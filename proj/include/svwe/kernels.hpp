#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svwe/grid.hpp"

namespace svwe {

// The four Green's-kernel families, identified by their Fourier multipliers.
// ViscousWave fixes the fluid viscosity convention mu = 1/2, so the symbol of
// the dissipative term is |xi| and the per-mode eigenvalues are
// (-1 +- i sqrt(3)) |xi| / 2.
enum class FamilyKind { ViscousWave, Heat, Wave, DampedWave };

class KernelFamily {
  public:
    static KernelFamily viscous_wave() { return KernelFamily(FamilyKind::ViscousWave, 0.0); }
    static KernelFamily heat() { return KernelFamily(FamilyKind::Heat, 0.0); }
    static KernelFamily wave() { return KernelFamily(FamilyKind::Wave, 0.0); }
    static KernelFamily damped_wave(double c);

    FamilyKind kind() const { return kind_; }
    double damping() const { return damping_; }
    std::string name() const;
    static KernelFamily parse(const std::string& name);

  private:
    KernelFamily(FamilyKind k, double c) : kind_(k), damping_(c) {}
    FamilyKind kind_;
    double damping_;
};

// K-type propagates velocity data and forcing; J-type propagates the initial
// displacement and exists only for the viscous family here.
enum class KernelKind { VelocityPropagator, DisplacementPropagator };

// Fourier multiplier of the chosen kernel at time t and radial frequency
// xi_mag. Continuous through the removable singularities (sin(a)/a at
// xi -> 0, sinh(a)/a at |xi| -> c), handled by series fallback.
double multiplier(const KernelFamily& family, KernelKind kind, double t, double xi_mag);

// Inverse transform of the multiplier sampled on the grid's mode lattice.
// Throws NotFunctionValued for Wave in n = 3 and InsufficientResolution when
// a dissipative multiplier's tail is not resolved at the Nyquist frequency.
Field real_space_kernel(const KernelFamily& family, KernelKind kind, double t, const Grid& grid);

// Riemann-sum L^q norm of the real-space kernel (max norm for q = infinity,
// passed as q <= 0).
double lq_norm(const KernelFamily& family, KernelKind kind, double t, double q, const Grid& grid);

// Advisory resolution warnings (t vs dx and t vs L/2) for a kernel render.
std::vector<std::string> resolution_warnings(const KernelFamily& family, double t, const Grid& grid);

// ||K||^2_{L^2(R^n)} of the unit-time kernel by adaptive radial quadrature of
// the multiplier via Plancherel; the c_n constant of the variance law.
double unit_kernel_l2sq(const KernelFamily& family, KernelKind kind, int n);

// Fit of log|J| vs log|x| on the outer half of the box against the decay
// bound exponent -1 - n (N_exp - 1) / N_exp.
struct JDecayReport {
    double fitted_exponent = 0.0;
    double bound_exponent = 0.0;  // required value including slack
    double r_squared = 0.0;
    int points_used = 0;
    bool pass = false;
};
JDecayReport j_decay_check(const Grid& grid, int n_exp);

// Checks the factorization of the viscous kernel into a Poisson kernel
// convolved with a rescaled wave kernel, on both the multiplier side
// (pointwise identity) and the real-space side (fitted proportionality
// constant against the sampled Poisson kernel).
struct PoissonFactorizationReport {
    double multiplier_identity_max_err = 0.0;
    double fitted_constant = 0.0;
    double relative_residual = 0.0;
};
PoissonFactorizationReport poisson_wave_factorization(double t, const Grid& grid);

}  // namespace svwe
