#pragma once

#include <functional>

namespace svwe {

// Adaptive Simpson on [a, b] with absolute/relative tolerance. Throws
// QuadratureFailure when the recursion bottoms out without converging.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14, int max_depth = 60);

// Integral over [a, infinity) of a decaying integrand: maps the tail through
// geometric panels until the running contribution falls below the tolerance.
// `period_hint > 0` caps the panel width so oscillatory integrands are split
// at sub-period scale before the adaptive pass.
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol = 1e-9, double period_hint = 0.0);

// Integral over [a, b] pre-sliced at sub-period scale for oscillatory
// integrands; period_hint <= 0 falls back to a single adaptive pass.
double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                             double rel_tol = 1e-9, double period_hint = 0.0);

}  // namespace svwe
