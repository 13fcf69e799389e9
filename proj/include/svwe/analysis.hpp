#pragma once

#include <string>
#include <vector>

#include "svwe/kernels.hpp"
#include "svwe/solver.hpp"
#include "svwe/stats.hpp"

namespace svwe {

// ---------------------------------------------------------------------------
// Admissibility (square integrability of the Green's kernel in time-space)

enum class Verdict { Finite, Divergent, Inconclusive };

struct AdmissibilityReport {
    std::string family;
    int n = 0;
    double t = 0.0;
    std::vector<double> cutoffs;   // frequency-cutoff ladder R_i
    std::vector<double> partials;  // I(R_i), nondecreasing
    Verdict verdict = Verdict::Inconclusive;
    std::string rate;      // "logarithmic" | "polynomial" | "" for finite
    double poly_exponent = 0.0;
    double fit_r_squared = 0.0;    // of the divergence-rate fit
    double limit = 0.0;            // extrapolated, when finite
    std::string note;              // e.g. the heat time-singularity remark
};

// Cutoff-ladder classification of
//   I(R) = (2 pi)^{-n} int_0^t int_{|xi|<=R} |Khat_{t-s}(xi)|^2 dxi ds,
// normalized so finite limits equal the real-space constants
// c_n t^{3-n} / (3-n). The inner time integral is closed-form per family.
AdmissibilityReport admissibility(const KernelFamily& family, int n, double t,
                                  double cauchy_tol = 1e-5, double r2_threshold = 0.99);

// ---------------------------------------------------------------------------
// Exact Gaussian increment variance (continuum oracle, f = 1, zero data)

// E |u(t,x) - u(t',x)|^2 (time lag) or E |u(t,x) - u(t,x+shift)|^2 (space
// lag, t == t'), by adaptive radial quadrature of the spectral
// representation with closed-form inner time integrals. n in {1, 2}.
double exact_increment_variance(int n, double t, double t_prime, double x_shift,
                                double rel_tol = 1e-9);

// Same value with the inner time integral done by brute-force numeric
// quadrature instead of the closed forms; the independent route tests use.
double exact_increment_variance_numeric_inner(int n, double t, double t_prime, double x_shift,
                                              double rel_tol = 1e-8);

// ---------------------------------------------------------------------------
// Holder exponent estimation via structure functions

enum class Axis { Time, Space };

struct HolderReport {
    Axis axis = Axis::Time;
    std::vector<double> lags;
    std::vector<double> s2;  // ensemble structure function per lag
    double slope = 0.0;      // log S2 vs log lag
    double alpha = 0.0;      // slope / 2
    double alpha_lo = 0.0;   // bootstrap CI
    double alpha_hi = 0.0;
    double r_squared = 0.0;
    int replicates = 0;
};

// Shared fit core: per_replicate[r][i] is replicate r's spatially averaged
// squared increment at lags[i]. Validates >= 5 lags spanning >= 1.5 decades.
HolderReport holder_fit(Axis axis, const std::vector<double>& lags,
                        const std::vector<std::vector<double>>& per_replicate);

// Structure-function estimate from a stored ensemble. Time axis: lags pair
// snapshot times (base_index paired with later times); space axis: lags are
// cell-aligned shifts of the base_index snapshot.
HolderReport holder_estimate(const TrajectoryEnsemble& ensemble, Axis axis,
                             const std::vector<double>& lags, std::size_t base_index = 0);

// Streaming variant for ensembles too large to store: runs the simulation
// config with observation times derived from (base_time, lags).
HolderReport holder_estimate_run(const SimConfig& cfg, Axis axis, double base_time,
                                 const std::vector<double>& lags);

// Fit-window helper per the lag-window policy: lags inside
// [4 dx, L/8] (space) or [4 dt, T/8] (time), geometrically spaced, snapped
// to the dx / dt lattice, deduplicated.
std::vector<double> default_lag_ladder(const SimConfig& cfg, Axis axis, int count = 8);

// ---------------------------------------------------------------------------
// Estimator self-test on synthetic fractional paths

// Fractional Brownian path with Hurst exponent H on j/n, j = 0..n, exact
// covariance (circulant embedding); increments scaled so
// E |X(s+h) - X(s)|^2 = h^{2H}.
std::vector<double> synth_fbm_path(int n, double hurst, std::uint64_t seed,
                                   std::uint32_t replicate);

// Runs the structure-function estimator on fBm paths of known H.
HolderReport holder_selftest(double hurst, int n, int replicates, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Moment table

struct MomentCell {
    double t = 0.0;
    int p = 0;
    double sup_moment = 0.0;  // sup over x of empirical E|u(t,x)|^p
    double stderr_sup = 0.0;  // standard error at the sup cell
};

struct MomentTable {
    std::vector<MomentCell> cells;
    bool growing = false;  // sup moment at T exceeds value at first time by > 2 stderr
    double cell(double t, int p) const;
};

MomentTable moment_table_run(const SimConfig& cfg, const std::vector<int>& p_list);

}  // namespace svwe
