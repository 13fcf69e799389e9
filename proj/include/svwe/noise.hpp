#pragma once

#include <functional>

#include "svwe/grid.hpp"
#include "svwe/rng.hpp"

namespace svwe {

// Identifies one step's noise realization: (master seed, step index,
// replicate index). Regeneration from the same path is bit-identical.
struct SeedPath {
    std::uint64_t master_seed = 0;
    std::uint32_t step = 0;
    std::uint32_t replicate = 0;
};

// One time-step realization of lattice spacetime white noise: one i.i.d.
// N(0, dt dx^n) sample per cell, Wdot of the spacetime cell
// (t_j, t_j + dt] x cell. Convolution against kernels divides by dx^n to
// form the density used in Riemann sums; that split makes the discrete Ito
// isometry exact at lattice level.
struct NoiseIncrement {
    Grid grid{1, 1.0, 2};
    double dt = 0.0;
    SeedPath seed_path;
    std::vector<double> values;
};

NoiseIncrement sample_increment(const Grid& grid, double dt, const SeedPath& path);

// Allocation-free variant reusing the caller's increment storage.
void sample_increment_into(NoiseIncrement& inc, const Grid& grid, double dt, const SeedPath& path);

// Hands out one increment per step under the adaptedness protocol: the
// step's integrand must be committed before the step's increment can be
// drawn. Drawing out of phase throws AdaptednessViolation. This is the
// "state token" every stochastic consumer goes through.
class AdaptedNoiseSource {
  public:
    AdaptedNoiseSource(const Grid& grid, double dt, std::uint64_t master_seed,
                       std::uint32_t replicate);

    // Phase A: commit the integrand for the upcoming step. The source only
    // records that the commitment happened; the value is the caller's.
    void commit_integrand();
    // Phase B: draw the committed step's increment and advance the phase.
    const NoiseIncrement& draw_increment();

    std::uint32_t step() const { return step_; }
    bool awaiting_integrand() const { return awaiting_integrand_; }
    const Grid& grid() const { return grid_; }

  private:
    Grid grid_;
    double dt_;
    std::uint64_t master_seed_;
    std::uint32_t replicate_;
    std::uint32_t step_ = 0;
    bool awaiting_integrand_ = true;
    NoiseIncrement current_;
};

// Discrete stochastic integral of a step-process integrand: the caller
// supplies f at step j (a Field, committed before the increment is drawn)
// and the integral accumulates sum_j sum_cells f_j(cell) dW_j(cell).
class AdaptedIntegrator {
  public:
    AdaptedIntegrator(const Grid& grid, double dt, std::uint64_t master_seed,
                      std::uint32_t replicate);

    void commit_integrand(const Field& f);
    const NoiseIncrement& draw_increment();

    double value() const { return value_; }

  private:
    AdaptedNoiseSource source_;
    std::vector<double> committed_;
    double value_ = 0.0;
};

// Integral sample for a deterministic step integrand: steps steps of length
// dt with integrand(step) supplying the Field for that step.
double stochastic_integral(const Grid& grid, double dt, int steps,
                           const std::function<Field(int)>& integrand, std::uint64_t master_seed,
                           std::uint32_t replicate);

// sum_j sum_cells f_j^2 dt dx^n, the time-space L^2 mass of a step integrand.
double step_integrand_l2sq(const Grid& grid, double dt, int steps,
                           const std::function<Field(int)>& integrand);

// Compares the empirical p-th absolute moment of the stochastic integral
// against the exact Gaussian moment (p-1)!! (int int f^2)^{p/2}, p even.
struct BdgReport {
    double empirical = 0.0;
    double exact = 0.0;
    double ratio = 0.0;
    double tolerance = 0.05;
    bool pass = false;
};
BdgReport bdg_moment_check(const Grid& grid, double dt, int steps,
                           const std::function<Field(int)>& integrand, int p, int replicates,
                           std::uint64_t master_seed, double tolerance = 0.05);

}  // namespace svwe
