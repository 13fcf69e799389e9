#include "svwe/fsi.hpp"

#include <cmath>
#include <string>

namespace svwe {

using cd = std::complex<double>;

cd StokesProfile::value(double x3) const {
    const double r = xi_mag;
    return ut_hat * (1.0 - r * x3) * std::exp(r * x3);
}

cd StokesProfile::d2(double x3) const {
    const double r = xi_mag;
    return ut_hat * (-r * r) * (1.0 + r * x3) * std::exp(r * x3);
}

cd StokesProfile::d4(double x3) const {
    const double r = xi_mag;
    return ut_hat * (-r * r * r * r) * (3.0 + r * x3) * std::exp(r * x3);
}

double biharmonic_residual(const StokesProfile& p, const std::vector<double>& x3_samples) {
    const double r = p.xi_mag;
    double worst = 0.0;
    for (double x3 : x3_samples) {
        const cd res = r * r * r * r * p.value(x3) - 2.0 * r * r * p.d2(x3) + p.d4(x3);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

cd pressure_neumann(const StokesProfile& p) {
    const double r = p.xi_mag;
    const cd computed = p.mu * (-r * r * p.ut_hat + p.d2(0.0));
    const cd closed = -2.0 * p.mu * r * r * p.ut_hat;
    const double scale = std::max(std::abs(closed), 1e-300);
    if (std::abs(computed - closed) > 1e-12 * scale)
        throw Error("pressure Neumann data disagrees with -2 mu |xi|^2 ut at |xi|=" +
                    std::to_string(r));
    return computed;
}

cd dtn_closure(const StokesProfile& p) {
    if (!(p.xi_mag > 0.0))
        throw DegenerateMode("Neumann-to-Dirichlet multiplier 1/|xi| is undefined at xi = 0");
    return pressure_neumann(p) / p.xi_mag;
}

double dtn_symbol(double xi_mag, double mu) { return -2.0 * mu * xi_mag; }

}  // namespace svwe
