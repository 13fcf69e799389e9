#include "svwe/noise.hpp"

#include <cmath>

#include "svwe/errors.hpp"

namespace svwe {

void sample_increment_into(NoiseIncrement& inc, const Grid& grid, double dt,
                           const SeedPath& path) {
    if (!(dt > 0.0)) throw ConfigError("sample_increment: dt must be positive");
    inc.grid = grid;
    inc.dt = dt;
    inc.seed_path = path;
    inc.values.resize(grid.size());
    const double sigma = std::sqrt(dt * grid.cell_volume());
    const RngPolicy policy(path.master_seed);
    const std::int64_t n = static_cast<std::int64_t>(grid.size());
    // pairwise: each Philox block yields the normals of two adjacent cells
#pragma omp parallel for schedule(static) if (n >= 262144)
    for (std::int64_t i = 0; i < n; i += 2) {
        double pair[2];
        policy.normal_pair(path.step, path.replicate, static_cast<std::uint64_t>(i) >> 1, pair);
        inc.values[static_cast<std::size_t>(i)] = sigma * pair[0];
        if (i + 1 < n) inc.values[static_cast<std::size_t>(i + 1)] = sigma * pair[1];
    }
}

NoiseIncrement sample_increment(const Grid& grid, double dt, const SeedPath& path) {
    NoiseIncrement inc;
    sample_increment_into(inc, grid, dt, path);
    return inc;
}

AdaptedNoiseSource::AdaptedNoiseSource(const Grid& grid, double dt, std::uint64_t master_seed,
                                       std::uint32_t replicate)
    : grid_(grid), dt_(dt), master_seed_(master_seed), replicate_(replicate) {
    if (!(dt > 0.0)) throw ConfigError("AdaptedNoiseSource: dt must be positive");
}

void AdaptedNoiseSource::commit_integrand() {
    if (!awaiting_integrand_)
        throw AdaptednessViolation("integrand for step " + std::to_string(step_) +
                                   " already committed; draw the increment first");
    awaiting_integrand_ = false;
}

const NoiseIncrement& AdaptedNoiseSource::draw_increment() {
    if (awaiting_integrand_)
        throw AdaptednessViolation("increment for step " + std::to_string(step_) +
                                   " requested before its integrand was committed");
    sample_increment_into(current_, grid_, dt_, SeedPath{master_seed_, step_, replicate_});
    ++step_;
    awaiting_integrand_ = true;
    return current_;
}

AdaptedIntegrator::AdaptedIntegrator(const Grid& grid, double dt, std::uint64_t master_seed,
                                     std::uint32_t replicate)
    : source_(grid, dt, master_seed, replicate) {}

void AdaptedIntegrator::commit_integrand(const Field& f) {
    if (f.values.size() != source_.grid().size())
        throw ConfigError("commit_integrand: integrand grid does not match the noise grid");
    source_.commit_integrand();
    committed_ = f.values;
}

const NoiseIncrement& AdaptedIntegrator::draw_increment() {
    const NoiseIncrement& inc = source_.draw_increment();
    for (std::size_t i = 0; i < inc.values.size(); ++i) value_ += committed_[i] * inc.values[i];
    return inc;
}

double stochastic_integral(const Grid& grid, double dt, int steps,
                           const std::function<Field(int)>& integrand, std::uint64_t master_seed,
                           std::uint32_t replicate) {
    AdaptedIntegrator integ(grid, dt, master_seed, replicate);
    for (int j = 0; j < steps; ++j) {
        integ.commit_integrand(integrand(j));
        integ.draw_increment();
    }
    return integ.value();
}

double step_integrand_l2sq(const Grid& grid, double dt, int steps,
                           const std::function<Field(int)>& integrand) {
    double acc = 0.0;
    for (int j = 0; j < steps; ++j) {
        const Field f = integrand(j);
        for (double v : f.values) acc += v * v;
    }
    return acc * dt * grid.cell_volume();
}

namespace {
double double_factorial_odd(int p) {
    // (p-1)!! for even p
    double r = 1.0;
    for (int k = p - 1; k > 1; k -= 2) r *= k;
    return r;
}
}  // namespace

BdgReport bdg_moment_check(const Grid& grid, double dt, int steps,
                           const std::function<Field(int)>& integrand, int p, int replicates,
                           std::uint64_t master_seed, double tolerance) {
    if (p < 2 || p % 2 != 0) throw ConfigError("bdg_moment_check: p must be an even integer >= 2");
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (int r = 0; r < replicates; ++r) {
        const double sample = stochastic_integral(grid, dt, steps, integrand, master_seed,
                                                  static_cast<std::uint32_t>(r));
        acc += std::pow(std::abs(sample), p);
    }
    BdgReport rep;
    rep.empirical = acc / replicates;
    rep.exact = double_factorial_odd(p) *
                std::pow(step_integrand_l2sq(grid, dt, steps, integrand), 0.5 * p);
    rep.ratio = rep.empirical / rep.exact;
    rep.tolerance = tolerance;
    rep.pass = std::abs(rep.ratio - 1.0) <= tolerance;
    return rep;
}

}  // namespace svwe
