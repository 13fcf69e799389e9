#include "svwe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svwe/errors.hpp"

namespace svwe {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b,
                double fb, double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0) throw QuadratureFailure("adaptive Simpson: depth exhausted near x=" + std::to_string(m));
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(a, fa, b, fb, fm);
    const double tol = std::max(abs_tol, std::abs(whole) * rel_tol);
    return adaptive(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double rel_tol, double period_hint) {
    if (b <= a) return 0.0;
    const double width = b - a;
    if (period_hint <= 0.0 || width <= period_hint) return integrate(f, a, b, rel_tol, 1e-16);
    const int slices = static_cast<int>(std::ceil(width / period_hint));
    const double h = width / slices;
    double total = 0.0;
    for (int s = 0; s < slices; ++s) total += integrate(f, a + s * h, a + (s + 1) * h, rel_tol, 1e-16);
    return total;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol,
                             double period_hint) {
    double total = 0.0;
    double lo = a;
    double width = std::max(1.0, std::abs(a) * 0.5);
    if (period_hint > 0.0) width = std::min(width, period_hint);
    int quiet = 0;
    for (int panel = 0; panel < 4000; ++panel) {
        const double hi = lo + width;
        double piece;
        if (period_hint > 0.0 && width > period_hint) {
            // split at sub-period scale, then integrate each slice adaptively
            piece = 0.0;
            const int slices = static_cast<int>(std::ceil(width / period_hint));
            const double h = width / slices;
            for (int s = 0; s < slices; ++s)
                piece += integrate(f, lo + s * h, lo + (s + 1) * h, rel_tol * 0.1, 1e-16);
        } else {
            piece = integrate(f, lo, hi, rel_tol * 0.1, 1e-16);
        }
        total += piece;
        if (std::abs(piece) < rel_tol * std::max(std::abs(total), 1e-300)) {
            if (++quiet >= 3) return total;  // three consecutive negligible panels
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 1.6;
    }
    throw QuadratureFailure("integrate_to_infinity: tail did not settle after 4000 panels");
}

}  // namespace svwe
