#pragma once
// Non-compact quantum dilogarithm and its half-lattice companion.
//
// The primary function phi(x) is built from two geometric families of factors
//   (1 + q^{2n+1} u)   and   (1 + qstar^{2n+1} ustar),   n = 0, 1, 2, ...
// (numerator and denominator of the defining double product).  Its logarithm
// is exposed under two branch conventions:
//
//  * log_phi          - "canonical" branch: each factor is continued along the
//                       horizontal line Im x = const, anchored to 0 as
//                       Re x -> -inf.  Continuous in Re x wherever no factor
//                       vanishes on the line; this is the branch on which the
//                       inversion relation holds strictly.
//  * log_phi_termwise - principal-branch log of every factor.  Differs from
//                       the canonical branch by multiples of 2*pi*i once
//                       individual factors wind; this is the branch on which
//                       the +/- i*eta shift relation holds strictly.
//
// log_phi_quadrature evaluates the same function from its contour-integral
// representation (independent route, used for cross-validation), valid in the
// strip |Im x| < eta.  log_phi2 is the companion function whose two shifted
// copies multiply to phi; it is evaluated from its contour representation in
// the strip |Im x| < 2*eta.

#include "sg/modular.hpp"

namespace sg {

// Branch-tracked logarithm of f(s) = 1 - E*exp(Lambda*s) along real s,
// anchored to 0 at s -> -inf.  Requires Re Lambda > 0.  For |E*exp(Lambda*s)|
// <= 1 this is the principal log; beyond the modulus-one crossing the winding
// of the linear part is restored explicitly.  When f has a zero within
// zero_tol of the real s-axis, the branch steps by +pi (zero treated as lying
// below the contour) if zero_above, else by -pi.
cd continued_log(cd E, cd Lambda, double s, bool zero_above = true,
                 double zero_tol = 1e-9);

// Canonical-branch log phi(x).  Throws SingularityError when a product factor
// vanishes at x (|1 - w| < 1e-12), e.g. on the real axis at x = (2n+1)*sigma;
// ConvergenceError if a factor family fails to decay within the term budget.
cd log_phi(cd x, const ModularParams& p);

// Termwise principal-branch log phi(x); same singularity/term guards.
cd log_phi_termwise(cd x, const ModularParams& p);

// Contour-integral route for log phi(x): kernel
//   exp(-2ixy) / (4 sinh(b y) sinh(y/b) y)
// over the real line indented by a semicircle above y = 0.  Requires the
// integrand decay rate 2*eta - 2*|Im x| > 0.05, else ConvergenceError.
cd log_phi_quadrature(cd x, const ModularParams& p, double tol = 1e-11);

// Contour-integral route for log phi2(x): kernel
//   exp(-2ixy) / (8 cosh(2 eta y) sinh(b y) sinh(y/b) y)
// same indented contour.  Requires 4*eta - 2*|Im x| > 0.05, else
// ConvergenceError.
cd log_phi2(cd x, const ModularParams& p, double tol = 1e-11);

} // namespace sg
