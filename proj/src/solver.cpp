#include "svwe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "svwe/fft.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svwe {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;

double sinc(double a) {
    if (std::abs(a) < 1e-6) {
        const double a2 = a * a;
        return 1.0 - a2 / 6.0 + a2 * a2 / 120.0;
    }
    return std::sin(a) / a;
}
}  // namespace

// ---------------------------------------------------------------------------
// Nonlinearity

Nonlinearity Nonlinearity::zero() {
    return Nonlinearity("zero", [](double) { return 0.0; }, 1.0, 0.0);
}

Nonlinearity Nonlinearity::one() {
    return Nonlinearity("one", [](double) { return 1.0; }, 1.0, 1.0);
}

Nonlinearity Nonlinearity::sine() {
    return Nonlinearity("sin", [](double u) { return std::sin(u); }, 1.0, std::nullopt);
}

Nonlinearity Nonlinearity::affine(double a, double b) {
    const double lip = std::max(1e-12, std::abs(a) + std::abs(b));
    const std::string name = "affine(" + std::to_string(a) + "," + std::to_string(b) + ")";
    if (b == 0.0) return Nonlinearity(name, [a](double) { return a; }, lip, a);
    return Nonlinearity(name, [a, b](double u) { return a + b * u; }, lip, std::nullopt);
}

Nonlinearity Nonlinearity::custom(std::string name, std::function<double(double)> f,
                                  double lipschitz_bound) {
    if (!(lipschitz_bound > 0.0)) throw ConfigError("Nonlinearity: lipschitz_bound must be positive");
    return Nonlinearity(std::move(name), std::move(f), lipschitz_bound, std::nullopt);
}

Nonlinearity Nonlinearity::parse(const std::string& preset) {
    if (preset == "zero") return zero();
    if (preset == "one") return one();
    if (preset == "sin") return sine();
    if (preset.rfind("affine(", 0) == 0 && preset.back() == ')') {
        const std::string args = preset.substr(7, preset.size() - 8);
        const auto comma = args.find(',');
        if (comma != std::string::npos) {
            try {
                const double a = std::stod(args.substr(0, comma));
                const double b = std::stod(args.substr(comma + 1));
                return affine(a, b);
            } catch (const std::exception&) {
            }
        }
    }
    throw ConfigError("unknown nonlinearity preset '" + preset +
                      "' (f); expected zero|one|sin|affine(a,b)");
}

void Nonlinearity::spot_check(std::uint64_t seed, int pairs) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> range(-10.0, 10.0);
    for (int i = 0; i < pairs; ++i) {
        const double a = range(rng), b = range(rng);
        const double fa = f_(a), fb = f_(b);
        if (std::abs(fa - fb) > lipschitz_ * std::abs(a - b) + 1e-12)
            throw ConfigError("nonlinearity '" + name_ + "' violates its Lipschitz bound at (" +
                              std::to_string(a) + ", " + std::to_string(b) + ")");
        if (std::abs(fa) > lipschitz_ * (1.0 + std::abs(a)) + 1e-12)
            throw ConfigError("nonlinearity '" + name_ + "' violates the growth bound at " +
                              std::to_string(a));
    }
}

// ---------------------------------------------------------------------------
// State and flow

SolverState SolverState::from_initial_data(const InitialData& data) {
    if (!(data.g.grid == data.h.grid)) throw ConfigError("initial data g, h must share a grid");
    if (!data.g.all_finite() || !data.h.all_finite())
        throw ConfigError("initial data must be finite");
    SolverState s;
    s.grid = data.g.grid;
    s.time = 0.0;
    s.u_hat = forward_transform(data.g).coefficients;
    s.v_hat = forward_transform(data.h).coefficients;
    return s;
}

Field SolverState::displacement() const {
    SpectralField s;
    s.grid = grid;
    s.coefficients = u_hat;
    return inverse_transform(s);
}

void SolverState::check_finite() const {
    for (const cplx& c : u_hat)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NonFiniteState("displacement coefficient became non-finite at t=" +
                                 std::to_string(time));
    for (const cplx& c : v_hat)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw NonFiniteState("velocity coefficient became non-finite at t=" +
                                 std::to_string(time));
}

ModeFlow::ModeFlow(const Grid& grid, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw ConfigError("ModeFlow: dt must be positive");
    const std::size_t n = grid.size();
    a_uu_.resize(n);
    a_uv_.resize(n);
    a_vu_.resize(n);
    a_vv_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = grid.frequency_magnitude(i);
        const double damp = std::exp(-0.5 * rho * dt);
        const double a = 0.5 * kSqrt3 * rho * dt;
        const double c = std::cos(a);
        const double s_over = dt * sinc(a);  // sin(omega dt) / omega
        const double s = std::sin(a);
        a_uu_[i] = damp * (c + s / kSqrt3);
        a_uv_[i] = damp * s_over;
        a_vu_[i] = -damp * (2.0 * rho / kSqrt3) * s;
        a_vv_[i] = damp * (c - s / kSqrt3);
    }
}

void ModeFlow::apply(SolverState& state) const {
    const std::size_t n = state.u_hat.size();
    cplx* u = state.u_hat.data();
    cplx* v = state.v_hat.data();
    const double* uu = a_uu_.data();
    const double* uv = a_uv_.data();
    const double* vu = a_vu_.data();
    const double* vv = a_vv_.data();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx nu = uu[i] * u[i] + uv[i] * v[i];
        const cplx nv = vu[i] * u[i] + vv[i] * v[i];
        u[i] = nu;
        v[i] = nv;
    }
    state.time += dt_;
}

// ---------------------------------------------------------------------------
// Deterministic propagator

Field propagate_deterministic(const InitialData& data, double t, const SampledForcing* forcing) {
    if (t < 0.0) throw ConfigError("propagate_deterministic: t must be >= 0");
    if (t == 0.0) return data.g;
    const Grid& grid = data.g.grid;
    const KernelFamily fam = KernelFamily::viscous_wave();
    SpectralField g_hat = forward_transform(data.g);
    const SpectralField h_hat = forward_transform(data.h);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rho = grid.frequency_magnitude(i);
        g_hat.coefficients[i] =
            multiplier(fam, KernelKind::DisplacementPropagator, t, rho) * g_hat.coefficients[i] +
            multiplier(fam, KernelKind::VelocityPropagator, t, rho) * h_hat.coefficients[i];
    }
    if (forcing && !forcing->samples.empty()) {
        SpectralField f_hat;
        for (std::size_t j = 0; j < forcing->samples.size(); ++j) {
            const double s = j * forcing->dt;
            if (s >= t - 1e-12 * t) break;
            forward_transform(forcing->samples[j], f_hat);
            for (std::size_t i = 0; i < grid.size(); ++i)
                g_hat.coefficients[i] +=
                    multiplier(fam, KernelKind::VelocityPropagator, t - s,
                               grid.frequency_magnitude(i)) *
                    f_hat.coefficients[i] * forcing->dt;
        }
    }
    return inverse_transform(g_hat);
}

// ---------------------------------------------------------------------------
// Stochastic stepper

SolverState step_stochastic(const SolverState& state, double dt, const Nonlinearity& f,
                            const NoiseIncrement& increment) {
    SolverState next = state;
    const Grid& grid = state.grid;
    if (increment.values.size() != grid.size())
        throw ConfigError("step_stochastic: increment grid does not match state grid");

    Field forcing(grid);
    const double inv_cell = 1.0 / grid.cell_volume();
    if (f.is_constant()) {
        const double c = f.constant_value();
        for (std::size_t i = 0; i < grid.size(); ++i)
            forcing.values[i] = c * increment.values[i] * inv_cell;
    } else {
        const Field u = state.displacement();
        for (std::size_t i = 0; i < grid.size(); ++i)
            forcing.values[i] = f(u.values[i]) * increment.values[i] * inv_cell;
    }
    const SpectralField f_hat = forward_transform(forcing);
    for (std::size_t i = 0; i < grid.size(); ++i) next.v_hat[i] += f_hat.coefficients[i];

    const ModeFlow flow(grid, dt);
    flow.apply(next);
    next.check_finite();
    return next;
}

// ---------------------------------------------------------------------------
// Configuration

Field field_preset(const std::string& preset, const Grid& grid) {
    Field f(grid);
    if (preset == "zero") return f;
    if (preset.rfind("gaussian(", 0) == 0 && preset.back() == ')') {
        const double sigma = std::stod(preset.substr(9, preset.size() - 10));
        if (!(sigma > 0.0)) throw ConfigError("gaussian preset needs sigma > 0 (g/h)");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double r = grid.coordinate_magnitude(i);
            f.values[i] = std::exp(-0.5 * r * r / (sigma * sigma));
        }
        return f;
    }
    if (preset.rfind("mode(", 0) == 0 && preset.back() == ')') {
        const int k = std::stoi(preset.substr(5, preset.size() - 6));
        int idx[3];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.unflatten(i, idx);
            double phase = 0.0;
            // cosine along the first axis at mode k
            phase = 2.0 * M_PI * k / grid.extent() * grid.coordinate(idx[0]);
            f.values[i] = std::cos(phase);
        }
        return f;
    }
    throw ConfigError("unknown field preset '" + preset + "' (g/h); expected zero|gaussian(s)|mode(k)");
}

InitialData SimConfig::initial_data() const {
    const Grid g = grid();
    return InitialData{field_preset(g_preset, g), field_preset(h_preset, g)};
}

void SimConfig::validate() {
    if (dim < 1 || dim > 2) throw ConfigError("n must be 1 or 2 (n)");
    if (!(extent > 0.0)) throw ConfigError("L must be positive (L)");
    if (points_per_axis < 2 || (points_per_axis & (points_per_axis - 1)))
        throw ConfigError("N must be a power of two >= 2 (N)");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive (dt)");
    if (!(horizon > 0.0)) throw ConfigError("T must be positive (T)");
    if (replicates < 1) throw ConfigError("R must be >= 1 (R)");
    f.spot_check();
    if (observe_times.empty()) observe_times.push_back(horizon);
    for (double& t : observe_times) {
        if (t < 0.0 || t > horizon + 1e-9)
            throw ConfigError("observe_times must lie in [0, T] (observe_times)");
        t = std::round(t / dt) * dt;  // snap to the step lattice
    }
    std::sort(observe_times.begin(), observe_times.end());
    observe_times.erase(std::unique(observe_times.begin(), observe_times.end()),
                        observe_times.end());
}

// ---------------------------------------------------------------------------
// Trajectories and ensembles

void run_trajectory(const SimConfig& cfg, std::uint32_t replicate,
                    const std::function<void(std::size_t, const SolverState&)>& on_observe) {
    const Grid grid = cfg.grid();
    SolverState state = SolverState::from_initial_data(cfg.initial_data());
    const ModeFlow flow(grid, cfg.dt);
    AdaptedNoiseSource source(grid, cfg.dt, cfg.seed, replicate);

    const int total_steps = static_cast<int>(std::llround(cfg.horizon / cfg.dt));
    std::vector<int> observe_steps;
    observe_steps.reserve(cfg.observe_times.size());
    for (double t : cfg.observe_times)
        observe_steps.push_back(static_cast<int>(std::llround(t / cfg.dt)));

    Field forcing(grid);
    Field u_real(grid);
    SpectralField f_hat(grid);
    SpectralField u_spec(grid);
    const double inv_cell = 1.0 / grid.cell_volume();
    const bool constant_f = cfg.f.is_constant();
    const double const_val = constant_f ? cfg.f.constant_value() : 0.0;

    std::size_t obs_cursor = 0;
    auto emit_if_observed = [&](int step_index) {
        while (obs_cursor < observe_steps.size() && observe_steps[obs_cursor] == step_index) {
            on_observe(obs_cursor, state);
            ++obs_cursor;
        }
    };

    emit_if_observed(0);
    for (int j = 0; j < total_steps; ++j) {
        // left-endpoint integrand, committed before the increment is drawn
        if (constant_f) {
            source.commit_integrand();
            const NoiseIncrement& inc = source.draw_increment();
            for (std::size_t i = 0; i < grid.size(); ++i)
                forcing.values[i] = const_val * inc.values[i] * inv_cell;
        } else {
            u_spec.grid = grid;
            u_spec.coefficients = state.u_hat;
            inverse_transform(u_spec, u_real);
            source.commit_integrand();
            const NoiseIncrement& inc = source.draw_increment();
            for (std::size_t i = 0; i < grid.size(); ++i)
                forcing.values[i] = cfg.f(u_real.values[i]) * inc.values[i] * inv_cell;
        }
        forward_transform(forcing, f_hat);
        for (std::size_t i = 0; i < grid.size(); ++i) state.v_hat[i] += f_hat.coefficients[i];
        flow.apply(state);
        if ((j & 63) == 0 || j + 1 == total_steps) state.check_finite();
        emit_if_observed(j + 1);
    }
}

TrajectoryEnsemble run_ensemble(const SimConfig& cfg, std::size_t max_bytes) {
    SimConfig config = cfg;
    config.validate();
    const Grid grid = config.grid();
    const std::size_t bytes = sizeof(double) * grid.size() * config.observe_times.size() *
                              static_cast<std::size_t>(config.replicates);
    if (bytes > max_bytes)
        throw ConfigError("run_ensemble: snapshot storage " + std::to_string(bytes) +
                          " bytes exceeds the limit; use for_each_replicate (R)");

    TrajectoryEnsemble ens;
    ens.config = config;
    ens.times = config.observe_times;
    ens.snapshots.assign(config.replicates,
                         std::vector<std::vector<double>>(config.observe_times.size()));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < config.replicates; ++r) {
        run_trajectory(config, static_cast<std::uint32_t>(r),
                       [&, r](std::size_t i, const SolverState& s) {
                           ens.snapshots[r][i] = s.displacement().values;
                       });
    }
    return ens;
}

void for_each_replicate(const SimConfig& cfg,
                        const std::function<void(int, const std::vector<std::vector<double>>&)>& visit) {
    SimConfig config = cfg;
    config.validate();
#pragma omp parallel
    {
        std::vector<std::vector<double>> snaps(config.observe_times.size());
#pragma omp for schedule(dynamic)
        for (int r = 0; r < config.replicates; ++r) {
            run_trajectory(config, static_cast<std::uint32_t>(r),
                           [&](std::size_t i, const SolverState& s) {
                               snaps[i] = s.displacement().values;
                           });
            visit(r, snaps);
        }
    }
}

// ---------------------------------------------------------------------------
// Picard iteration

PicardReport picard_iterate(const SimConfig& cfg_in, int k_max) {
    SimConfig cfg = cfg_in;
    cfg.validate();
    if (k_max < 1) throw ConfigError("picard_iterate: K_max must be >= 1");
    const Grid grid = cfg.grid();
    const int steps = static_cast<int>(std::llround(cfg.horizon / cfg.dt));
    const std::size_t cells = grid.size();
    const ModeFlow flow(grid, cfg.dt);

    // Deterministic base iterate u_0 at every step, shared by all replicates.
    std::vector<std::vector<double>> u0(steps + 1);
    {
        SolverState s = SolverState::from_initial_data(cfg.initial_data());
        u0[0] = s.displacement().values;
        for (int j = 1; j <= steps; ++j) {
            flow.apply(s);
            u0[j] = s.displacement().values;
        }
    }

    // gap2[k-1][j * cells + x] accumulates (u_k - u_{k-1})^2 across replicates
    std::vector<std::vector<double>> gap2(k_max,
                                          std::vector<double>((steps + 1) * cells, 0.0));

    std::vector<double> terminal_first;
    std::vector<std::vector<double>> iterate_snaps(k_max + 1);
    iterate_snaps[0] = u0[steps];

#pragma omp parallel
    {
        std::vector<std::vector<double>> prev(steps + 1), cur(steps + 1);
        std::vector<std::vector<double>> local(k_max,
                                               std::vector<double>((steps + 1) * cells, 0.0));
        Field forcing(grid);
        SpectralField f_hat(grid);
#pragma omp for schedule(dynamic)
        for (int r = 0; r < cfg.replicates; ++r) {
            prev = u0;
            for (int k = 1; k <= k_max; ++k) {
                SolverState s = SolverState::from_initial_data(cfg.initial_data());
                cur[0] = s.displacement().values;
                for (int j = 0; j < steps; ++j) {
                    const NoiseIncrement inc =
                        sample_increment(grid, cfg.dt,
                                         SeedPath{cfg.seed, static_cast<std::uint32_t>(j),
                                                  static_cast<std::uint32_t>(r)});
                    const double inv_cell = 1.0 / grid.cell_volume();
                    for (std::size_t i = 0; i < cells; ++i)
                        forcing.values[i] = cfg.f(prev[j][i]) * inc.values[i] * inv_cell;
                    forward_transform(forcing, f_hat);
                    for (std::size_t i = 0; i < cells; ++i) s.v_hat[i] += f_hat.coefficients[i];
                    flow.apply(s);
                    cur[j + 1] = s.displacement().values;
                }
                s.check_finite();
                for (int j = 0; j <= steps; ++j)
                    for (std::size_t i = 0; i < cells; ++i) {
                        const double d = cur[j][i] - prev[j][i];
                        local[k - 1][j * cells + i] += d * d;
                    }
                std::swap(prev, cur);
                if (r == 0) {
#pragma omp critical
                    {
                        iterate_snaps[k] = prev[steps];
                        if (k == k_max) terminal_first = prev[steps];
                    }
                }
            }
        }
#pragma omp critical
        {
            for (int k = 0; k < k_max; ++k)
                for (std::size_t i = 0; i < gap2[k].size(); ++i) gap2[k][i] += local[k][i];
        }
    }

    PicardReport rep;
    rep.h2.resize(k_max);
    for (int k = 0; k < k_max; ++k) {
        double sup = 0.0;
        for (double v : gap2[k]) sup = std::max(sup, v);
        rep.h2[k] = sup / cfg.replicates;
    }

    // factorial envelope from the inductive inequality, seeded by Hhat_1^2:
    // c = L^2 c_n t^{2-n} with c_n = ||K||_{L^2}^2 from quadrature
    const double c_n = unit_kernel_l2sq(KernelFamily::viscous_wave(),
                                        KernelKind::VelocityPropagator, cfg.dim);
    const double lips = cfg.f.lipschitz_bound();
    const double c_rate =
        lips * lips * c_n * std::pow(cfg.horizon, 2.0 - cfg.dim);
    rep.envelope.resize(k_max);
    double env = rep.h2.empty() ? 0.0 : rep.h2[0];
    rep.envelope[0] = env;
    for (int k = 2; k <= k_max; ++k) {
        env *= c_rate * cfg.horizon / (k - 1);
        rep.envelope[k - 1] = env;
    }

    rep.terminal.grid = grid;
    rep.terminal.values = std::move(terminal_first);
    rep.iterates.resize(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        rep.iterates[k].grid = grid;
        rep.iterates[k].values = std::move(iterate_snaps[k]);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lattice-exact second-moment oracles

namespace {
double rho_of_impl(const Grid& grid, std::size_t i) { return grid.frequency_magnitude(i); }
}  // namespace

double lattice_additive_variance(const Grid& grid, double dt, double t) {
    const KernelFamily fam = KernelFamily::viscous_wave();
    const int steps = static_cast<int>(std::llround(t / dt));
    double vol = 1.0;
    for (int d = 0; d < grid.dim(); ++d) vol *= grid.extent();
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid.size()); ++i) {
        const double rho = rho_of_impl(grid, static_cast<std::size_t>(i));
        double mode_sum = 0.0;
        for (int j = 0; j < steps; ++j) {
            const double m = multiplier(fam, KernelKind::VelocityPropagator, t - j * dt, rho);
            mode_sum += m * m;
        }
        acc += mode_sum;
    }
    return acc * dt / vol;
}

double lattice_time_increment_variance(const Grid& grid, double dt, double t_lo, double t_hi) {
    if (t_hi < t_lo) std::swap(t_lo, t_hi);
    const KernelFamily fam = KernelFamily::viscous_wave();
    const int steps_hi = static_cast<int>(std::llround(t_hi / dt));
    const int steps_lo = static_cast<int>(std::llround(t_lo / dt));
    double vol = 1.0;
    for (int d = 0; d < grid.dim(); ++d) vol *= grid.extent();
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid.size()); ++i) {
        const double rho = rho_of_impl(grid, static_cast<std::size_t>(i));
        double mode_sum = 0.0;
        for (int j = 0; j < steps_hi; ++j) {
            const double hi = multiplier(fam, KernelKind::VelocityPropagator, t_hi - j * dt, rho);
            const double lo = j < steps_lo
                                  ? multiplier(fam, KernelKind::VelocityPropagator, t_lo - j * dt, rho)
                                  : 0.0;
            mode_sum += (hi - lo) * (hi - lo);
        }
        acc += mode_sum;
    }
    return acc * dt / vol;
}

double lattice_space_increment_variance(const Grid& grid, double dt, double t, double shift) {
    const KernelFamily fam = KernelFamily::viscous_wave();
    const int steps = static_cast<int>(std::llround(t / dt));
    double vol = 1.0;
    for (int d = 0; d < grid.dim(); ++d) vol *= grid.extent();
    double acc = 0.0;
    int idx[3];
#pragma omp parallel for schedule(static) reduction(+ : acc) private(idx)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid.size()); ++i) {
        grid.unflatten(static_cast<std::size_t>(i), idx);
        const double rho = rho_of_impl(grid, static_cast<std::size_t>(i));
        // shift along the first axis: |e^{i xi_0 shift} - 1|^2 = 2(1 - cos)
        const double xi0 = grid.frequency(idx[0]);
        const double geom = 2.0 * (1.0 - std::cos(xi0 * shift));
        double mode_sum = 0.0;
        for (int j = 0; j < steps; ++j) {
            const double m = multiplier(fam, KernelKind::VelocityPropagator, t - j * dt, rho);
            mode_sum += m * m;
        }
        acc += mode_sum * geom;
    }
    return acc * dt / vol;
}

}  // namespace svwe
