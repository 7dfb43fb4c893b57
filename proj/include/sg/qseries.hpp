#pragma once
// q-product primitives and the dense complex polynomial / linear algebra used
// by the t^2 bootstrap.
//
// Conventions: every q-Pochhammer here consumes the *squared* nome directly,
// (z; Q)_n = prod_{k<n} (1 - z Q^k), so callers pass q^2 or qstar^2.  The
// shortened theta function is theta1(u) = (u; q^2)_inf (q^2/u; q^2)_inf.

#include <complex>
#include <vector>

#include "sg/modular.hpp"

namespace sg {

// Infinite (n < 0) or finite q-Pochhammer (z; Q)_n.  The infinite product is
// truncated by the geometric tail bound |z||Q|^k / (1 - |Q|) < tol;
// ConvergenceError if |Q| >= 1 with n infinite or the term cap is exhausted.
cd qpoch(cd z, cd nome, long n = -1, double tol = 1e-16);

// theta1(u) = (u; q^2)_inf (q^2 u^-1; q^2)_inf; DomainError at u = 0.
cd theta1(cd u, const ModularParams& p);

// |theta1(u)/theta1(ustar)* - e^{i pi (x + sigma)^2 + i pi c_b}| with the
// starred factor evaluated at (ustar(x), qstar^2).  DomainError at theta1
// zeros (x on the pole/zero lattice).
double jacobi_ratio_check(cd x, const ModularParams& p);

// ---------------------------------------------------------------------------
// Dense complex polynomials, ascending coefficients c[0] + c[1] u + ...
// The `reciprocal` flag marks polynomials in 1/u (the primed objects A', B',
// T0'), which keeps the reflection identities testable verbatim instead of
// silently rewriting them in u.
struct CPoly {
    std::vector<cd> c{cd(0.0)};
    bool reciprocal = false;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    cd eval(cd u) const;           // Horner in u, or in 1/u when reciprocal
    CPoly& trim(double tol = 0.0); // drop trailing coefficients below tol
};

CPoly padd(const CPoly& a, const CPoly& b);
CPoly psub(const CPoly& a, const CPoly& b);
CPoly pmul(const CPoly& a, const CPoly& b);
CPoly pscale(const CPoly& a, cd s);

// u^j * p(u) (degree shift); preserves the reciprocal flag, meaning (1/u)^j.
CPoly pshift_deg(const CPoly& a, int j);

// Argument scaling p(u) -> p(lambda u): c_n -> lambda^n c_n.
CPoly q_scale(const CPoly& p, cd lambda);

// prod_nu (1 - u/u_nu), constant term exactly 1; DomainError on a zero root.
CPoly poly_from_roots(const std::vector<cd>& roots);

// All polynomial roots via the companion matrix plus one Newton polish step,
// deterministically ordered by (modulus, argument).
std::vector<cd> poly_roots(const CPoly& p);

// ---------------------------------------------------------------------------
// Dense linear algebra (row-major square complex matrix).
struct CMatrix {
    int n = 0;
    std::vector<cd> a;
    explicit CMatrix(int n_ = 0) : n(n_), a(static_cast<size_t>(n_) * n_) {}
    cd& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    cd at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

struct LinearSolution {
    std::vector<cd> x;
    double residual = 0.0;           // ||M x - rhs||_inf, always reported
    double condition_estimate = 0.0; // max/min pivot magnitude (crude)
};

// Partial-pivot LU solve with row equilibration.  SingularSystemError (with
// the pivot-ratio condition estimate in the message) when an equilibrated
// pivot falls below singular_tol.  Callers whose systems are hierarchically
// graded (pivots legitimately spanning many decades, e.g. the q^2-graded
// bootstrap systems) pass singular_tol = 0 and must validate the returned
// residual themselves.
LinearSolution linear_solve(const CMatrix& M, const std::vector<cd>& rhs,
                            double singular_tol = 1e-15);

} // namespace sg
