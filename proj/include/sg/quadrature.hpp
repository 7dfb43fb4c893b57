#pragma once
// Complex-valued quadrature engines: adaptive Gauss-Kronrod 15(7) for smooth
// oscillatory integrands and tanh-sinh (double-exponential) for panels with
// endpoint singularities.  Both integrate a complex function of a real
// parameter; contour pieces pass their own Jacobian inside the integrand.

#include <functional>
#include <vector>

#include "sg/modular.hpp"

namespace sg {

// Adaptive GK15 on [a, b].  Splits until the local Kronrod-Gauss error
// estimate satisfies err <= tol * max(1, |panel value|); ConvergenceError if
// the subdivision budget is exhausted before the global estimate passes.
cd integrate_gk(const std::function<cd(double)>& f, double a, double b,
                double tol = 1e-11, int max_panels = 4000);

// GK15 with forced breakpoints (singular or non-smooth interior events).
cd integrate_segments(const std::function<cd(double)>& f, double a, double b,
                      std::vector<double> breakpoints, double tol = 1e-11,
                      int max_panels = 4000);

// Tanh-sinh rule on (a, b); tolerates integrable endpoint singularities
// (logs, inverse square roots).  Level-doubling until successive refinements
// agree to tol; ConvergenceError past max_level.
cd tanh_sinh(const std::function<cd(double)>& f, double a, double b,
             double tol = 1e-12, int max_level = 11);

} // namespace sg
