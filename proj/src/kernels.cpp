#include "svwe/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "svwe/fft.hpp"
#include "svwe/quadrature.hpp"
#include "svwe/stats.hpp"

namespace svwe {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// sin(a)/a with series fallback below the cancellation threshold.
double sinc(double a) {
    if (std::abs(a) < 1e-6) {
        const double a2 = a * a;
        return 1.0 - a2 / 6.0 + a2 * a2 / 120.0;
    }
    return std::sin(a) / a;
}

// sinh(a)/a with the same guard.
double sinhc(double a) {
    if (std::abs(a) < 1e-6) {
        const double a2 = a * a;
        return 1.0 + a2 / 6.0 + a2 * a2 / 120.0;
    }
    return std::sinh(a) / a;
}

double surface_area(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        default: return 4.0 * M_PI;
    }
}

}  // namespace

KernelFamily KernelFamily::damped_wave(double c) {
    if (!(c > 0.0)) throw ConfigError("damped_wave: damping rate c must be positive");
    return KernelFamily(FamilyKind::DampedWave, c);
}

std::string KernelFamily::name() const {
    switch (kind_) {
        case FamilyKind::ViscousWave: return "viscous";
        case FamilyKind::Heat: return "heat";
        case FamilyKind::Wave: return "wave";
        case FamilyKind::DampedWave: return "damped";
    }
    return "?";
}

KernelFamily KernelFamily::parse(const std::string& name) {
    if (name == "viscous") return viscous_wave();
    if (name == "heat") return heat();
    if (name == "wave") return wave();
    if (name == "damped") return damped_wave(1.0);
    throw ConfigError("unknown kernel family '" + name + "' (family)");
}

double multiplier(const KernelFamily& family, KernelKind kind, double t, double xi_mag) {
    if (!(t > 0.0)) throw ConfigError("multiplier: t must be positive");
    const double rho = xi_mag;
    if (kind == KernelKind::DisplacementPropagator) {
        if (family.kind() != FamilyKind::ViscousWave)
            throw ConfigError("DisplacementPropagator is defined only for the viscous family");
        const double a = 0.5 * kSqrt3 * rho * t;
        return std::exp(-0.5 * rho * t) * (std::cos(a) + std::sin(a) / kSqrt3);
    }
    switch (family.kind()) {
        case FamilyKind::ViscousWave:
            return std::exp(-0.5 * rho * t) * t * sinc(0.5 * kSqrt3 * rho * t);
        case FamilyKind::Heat:
            return std::exp(-rho * rho * t);
        case FamilyKind::Wave:
            return t * sinc(rho * t);
        case FamilyKind::DampedWave: {
            const double c = family.damping();
            const double disc = c * c - rho * rho;
            const double a = t * std::sqrt(std::abs(disc));
            const double osc = disc >= 0.0 ? sinhc(a) : sinc(a);
            return std::exp(-c * t) * t * osc;
        }
    }
    return 0.0;
}

std::vector<std::string> resolution_warnings(const KernelFamily& family, double t, const Grid& grid) {
    std::vector<std::string> out;
    if (t < 4.0 * grid.dx())
        out.push_back(family.name() + " kernel at t=" + std::to_string(t) +
                      " is under-resolved: t < 4 dx (dx=" + std::to_string(grid.dx()) + ")");
    if (t > 0.5 * grid.extent())
        out.push_back(family.name() + " kernel at t=" + std::to_string(t) +
                      " wraps: t > L/2 (L=" + std::to_string(grid.extent()) + ")");
    return out;
}

namespace {

void check_dissipative_tail(const KernelFamily& family, double t, const Grid& grid) {
    const double xi_max = grid.max_axis_frequency();
    double tail = 0.0;
    switch (family.kind()) {
        case FamilyKind::ViscousWave: tail = std::exp(-0.5 * xi_max * t); break;
        case FamilyKind::Heat: tail = std::exp(-xi_max * xi_max * t); break;
        default: return;  // wave-type multipliers have no frequency tail to resolve
    }
    if (tail > 1e-3)
        throw InsufficientResolution(family.name() + " multiplier tail " + std::to_string(tail) +
                                     " at Nyquist |xi|=" + std::to_string(xi_max) +
                                     " exceeds 1e-3 for t=" + std::to_string(t));
}

SpectralField sampled_multiplier(const KernelFamily& family, KernelKind kind, double t,
                                 const Grid& grid) {
    SpectralField s(grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        s.coefficients[i] = multiplier(family, kind, t, grid.frequency_magnitude(i));
    return s;
}

}  // namespace

Field real_space_kernel(const KernelFamily& family, KernelKind kind, double t, const Grid& grid) {
    if (family.kind() == FamilyKind::Wave && grid.dim() >= 3)
        throw NotFunctionValued("wave kernel in n=3 is a surface measure, not a function");
    check_dissipative_tail(family, t, grid);
    return inverse_transform(sampled_multiplier(family, kind, t, grid));
}

double lq_norm(const KernelFamily& family, KernelKind kind, double t, double q, const Grid& grid) {
    const Field k = real_space_kernel(family, kind, t, grid);
    if (q <= 0.0) {  // max norm
        double m = 0.0;
        for (double v : k.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (q < 1.0) throw ConfigError("lq_norm: q must satisfy q >= 1 (or q <= 0 for the max norm)");
    double acc = 0.0;
    for (double v : k.values) acc += std::pow(std::abs(v), q);
    return std::pow(acc * grid.cell_volume(), 1.0 / q);
}

double unit_kernel_l2sq(const KernelFamily& family, KernelKind kind, int n) {
    const double prefactor = surface_area(n) / std::pow(2.0 * M_PI, n);
    const auto integrand = [&](double rho) {
        const double m = multiplier(family, kind, 1.0, rho);
        return m * m * std::pow(rho, n - 1);
    };
    // quarter period of the sin(sqrt(3) rho / 2) oscillation
    const double hint = M_PI / kSqrt3;
    const FamilyKind fk = family.kind();
    if (fk == FamilyKind::ViscousWave || fk == FamilyKind::Heat)
        return prefactor * integrate_to_infinity(integrand, 0.0, 1e-10, hint);

    // wave-type multipliers decay like sin^2(rho)/rho^2: integrate a finite
    // range and add the analytic mean-value tail (valid for n = 1 only;
    // these kernels are not square integrable in higher dimensions)
    if (n != 1)
        throw Error(family.name() + " unit kernel is not in L^2(R^n) for n = " + std::to_string(n));
    const double r_stop = 2.0e4;
    const double body = integrate_oscillatory(integrand, 0.0, r_stop, 1e-10, hint);
    double tail;
    if (fk == FamilyKind::Wave) {
        // int_R (1 - cos 2 rho) / (2 rho^2) ~ 1/(2R) - sin(2R)/(4R^2)
        tail = 0.5 / r_stop - std::sin(2.0 * r_stop) / (4.0 * r_stop * r_stop);
    } else {
        const double c = family.damping();
        tail = std::exp(-2.0 * c) * 0.5 / r_stop;
    }
    return prefactor * (body + tail);
}

JDecayReport j_decay_check(const Grid& grid, int n_exp) {
    const int n = grid.dim();
    if (n_exp < n + 1) throw ConfigError("j_decay_check: N_exp must be >= n+1");
    const Field j = real_space_kernel(KernelFamily::viscous_wave(),
                                      KernelKind::DisplacementPropagator, 1.0, grid);
    const double lo = 0.25 * grid.extent();
    const double hi = 0.495 * grid.extent();
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.coordinate_magnitude(i);
        if (r < lo || r > hi) continue;
        const double v = std::abs(j.values[i]);
        if (v < 1e-300) continue;
        lx.push_back(std::log(r));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 5) throw FitWindowEmpty("j_decay_check: fewer than 5 points in [L/4, L/2)");
    const LineFit fit = fit_line(lx, ly);
    JDecayReport rep;
    rep.fitted_exponent = fit.slope;
    rep.r_squared = fit.r_squared;
    rep.points_used = static_cast<int>(lx.size());
    rep.bound_exponent = -1.0 - n * (n_exp - 1.0) / n_exp + 0.2;
    rep.pass = rep.fitted_exponent <= rep.bound_exponent;
    return rep;
}

PoissonFactorizationReport poisson_wave_factorization(double t, const Grid& grid) {
    const KernelFamily viscous = KernelFamily::viscous_wave();
    const KernelFamily wave = KernelFamily::wave();
    const int n = grid.dim();
    PoissonFactorizationReport rep;

    // Multiplier identity: Khat_t(xi) = e^{-|xi| t/2} (2/sqrt(3)) KhatW_{sqrt(3) t/2}(xi).
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rho = grid.frequency_magnitude(i);
        const double lhs = multiplier(viscous, KernelKind::VelocityPropagator, t, rho);
        const double rhs = std::exp(-0.5 * rho * t) * (2.0 / kSqrt3) *
                           multiplier(wave, KernelKind::VelocityPropagator, 0.5 * kSqrt3 * t, rho);
        rep.multiplier_identity_max_err =
            std::max(rep.multiplier_identity_max_err, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }

    // Real-space route: sample the Poisson kernel directly in x, convolve with
    // the wave kernel at time sqrt(3) t / 2, and fit the proportionality
    // constant against the viscous kernel.
    check_dissipative_tail(viscous, t, grid);
    Field poisson(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.coordinate_magnitude(i);
        poisson.values[i] = t / std::pow(t * t + 4.0 * r * r, 0.5 * (n + 1));
    }
    const Field wave_k = real_space_kernel(wave, KernelKind::VelocityPropagator, 0.5 * kSqrt3 * t, grid);
    const Field direct = real_space_kernel(viscous, KernelKind::VelocityPropagator, t, grid);

    SpectralField conv = forward_transform(poisson);
    const SpectralField wave_hat = forward_transform(wave_k);
    for (std::size_t i = 0; i < conv.coefficients.size(); ++i)
        conv.coefficients[i] *= wave_hat.coefficients[i];
    const Field convolved = inverse_transform(conv);

    double num = 0.0, den = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        num += direct.values[i] * convolved.values[i];
        den += convolved.values[i] * convolved.values[i];
        ref += direct.values[i] * direct.values[i];
    }
    rep.fitted_constant = num / den;
    double res = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = direct.values[i] - rep.fitted_constant * convolved.values[i];
        res += d * d;
    }
    rep.relative_residual = std::sqrt(res / ref);
    return rep;
}

}  // namespace svwe
