#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "svwe/grid.hpp"
#include "svwe/kernels.hpp"
#include "svwe/noise.hpp"

namespace svwe {

// Displacement and velocity data on a shared grid.
struct InitialData {
    Field g;  // displacement
    Field h;  // velocity
};

// Scalar nonlinearity scaling the noise, with its declared Lipschitz bound.
// spot_check samples random pairs and throws if either the Lipschitz bound or
// the linear growth bound |f(x)| <= L (1 + |x|) fails on them.
class Nonlinearity {
  public:
    static Nonlinearity zero();
    static Nonlinearity one();
    static Nonlinearity sine();
    static Nonlinearity affine(double a, double b);
    static Nonlinearity custom(std::string name, std::function<double(double)> f,
                               double lipschitz_bound);
    static Nonlinearity parse(const std::string& preset);

    double operator()(double u) const { return f_(u); }
    double lipschitz_bound() const { return lipschitz_; }
    const std::string& name() const { return name_; }
    // Constant integrands skip the per-step inverse transform of u.
    bool is_constant() const { return constant_.has_value(); }
    double constant_value() const { return *constant_; }
    void spot_check(std::uint64_t seed = 0x5eed, int pairs = 256) const;

  private:
    Nonlinearity(std::string name, std::function<double(double)> f, double lipschitz,
                 std::optional<double> constant)
        : name_(std::move(name)), f_(std::move(f)), lipschitz_(lipschitz), constant_(constant) {}
    std::string name_;
    std::function<double(double)> f_;
    double lipschitz_;
    std::optional<double> constant_;
};

// Spectral displacement/velocity pair at the current time. Hermitian
// symmetry is preserved by every update (all multipliers are real and even).
struct SolverState {
    Grid grid{1, 1.0, 2};
    double time = 0.0;
    std::vector<cplx> u_hat;
    std::vector<cplx> v_hat;

    static SolverState from_initial_data(const InitialData& data);
    Field displacement() const;
    void check_finite() const;  // throws NonFiniteState
};

// Exact homogeneous flow over a fixed step: the per-mode 2x2 matrix with
// eigenvalues (-1 +- i sqrt(3)) |xi| / 2, precomputed per (grid, dt).
class ModeFlow {
  public:
    ModeFlow(const Grid& grid, double dt);
    void apply(SolverState& state) const;
    double dt() const { return dt_; }

  private:
    double dt_;
    std::vector<double> a_uu_, a_uv_, a_vu_, a_vv_;
};

// Time-sampled deterministic forcing F(t_j, .) at t_j = j dt.
struct SampledForcing {
    double dt = 0.0;
    std::vector<Field> samples;
};

// J_t * g + K_t * h + left-endpoint quadrature of K_{t-s} * F, evaluated by
// direct multiplier application (no stepping). Exact at every t for F = 0.
Field propagate_deterministic(const InitialData& data, double t,
                              const SampledForcing* forcing = nullptr);

// One mild-solution step: inject the forcing impulse
// vhat += transform(f(u(t_n)) dW / dx^n), then apply the exact homogeneous
// flow over dt. The injected-then-flowed impulse reproduces the left-endpoint
// kernel K_{t - t_n} acting on the step's noise.
SolverState step_stochastic(const SolverState& state, double dt, const Nonlinearity& f,
                            const NoiseIncrement& increment);

// Simulation configuration shared by the ensemble runner and the CLI.
struct SimConfig {
    int dim = 1;
    double extent = 32.0;
    int points_per_axis = 512;
    double dt = 0.01;
    double horizon = 1.0;
    Nonlinearity f = Nonlinearity::one();
    std::string g_preset = "zero";  // zero | gaussian(sigma) | mode(k)
    std::string h_preset = "zero";
    int replicates = 1;
    std::uint64_t seed = 1;
    std::vector<double> observe_times;

    Grid grid() const { return Grid(dim, extent, points_per_axis); }
    InitialData initial_data() const;
    // snaps observe_times to step multiples; throws ConfigError on bad fields
    void validate();
};

Field field_preset(const std::string& preset, const Grid& grid);

// Runs one replicate trajectory, invoking on_observe(time_index, state) at
// each observation time (which must be step multiples).
void run_trajectory(const SimConfig& cfg, std::uint32_t replicate,
                    const std::function<void(std::size_t, const SolverState&)>& on_observe);

// Seeded collection of solution snapshots u(t_i, .) for every replicate.
// Storage is R x times x N^n doubles; run_ensemble refuses configurations
// that would exceed max_bytes.
struct TrajectoryEnsemble {
    SimConfig config;
    std::vector<double> times;
    // snapshot(r, i) = flat field of replicate r at times[i]
    std::vector<std::vector<std::vector<double>>> snapshots;

    const std::vector<double>& snapshot(int replicate, std::size_t time_index) const {
        return snapshots[replicate][time_index];
    }
};

TrajectoryEnsemble run_ensemble(const SimConfig& cfg,
                                std::size_t max_bytes = std::size_t(2) << 30);

// Streaming variant: visit(replicate, snapshots-for-this-replicate) runs on
// worker threads (one call per replicate, internally ordered by nothing);
// callers accumulate through their own per-replicate slots or thread-local
// partials.
void for_each_replicate(const SimConfig& cfg,
                        const std::function<void(int, const std::vector<std::vector<double>>&)>& visit);

// Picard iterates on a frozen noise realization per replicate: u_0 is the
// deterministic solution, u_k feeds f(u_{k-1}) into the stochastic
// convolution with the same increments for every k. Reports the empirical
// sup-over-(s <= t, x) L^2(Omega) gaps between consecutive iterates.
struct PicardReport {
    std::vector<double> h2;        // h2[k-1] = Hhat_k^2(T), k = 1 .. K_max
    std::vector<double> envelope;  // Hhat_1^2 (c t)^{k-1} / (k-1)!
    Field terminal;                // final iterate of replicate 0 at T
    std::vector<Field> iterates;   // u_0(T), ..., u_{K_max}(T) of replicate 0
};
PicardReport picard_iterate(const SimConfig& cfg, int k_max);

// Lattice-exact second moments of the additive-noise solution (f = 1, zero
// data) under the stepping scheme: dt sum_j (1/L^n) sum_k |Khat_{t-t_j}|^2
// and its increment counterparts. These are the solver's per-mode closed
// forms, exact in expectation, used as Monte Carlo oracles and for grid
// parameter tuning.
double lattice_additive_variance(const Grid& grid, double dt, double t);
double lattice_time_increment_variance(const Grid& grid, double dt, double t_lo, double t_hi);
double lattice_space_increment_variance(const Grid& grid, double dt, double t, double shift);

}  // namespace svwe
