#pragma once
// Order-by-order construction of the t^2-expanded auxiliary solutions.
//
// At each order m the functional relation
//   T0(q^{2m} u) F_m(u/q^2) + A(q^2 u) B(u) F_{m-1}(q^2 u)
//     = sum_{k=0}^{m} T_k(u) F_{m-k}(u) prod_{j=m-k+1}^{m} T0(q^{2j} u)
// closes into a finite linear system for the mN unknown coefficients of F_m
// (its constant term vanishes by the chi_+(0) = 1 normalisation) and the
// N-1 interior coefficients of T_m (endpoints are fixed: 1 and (-1)^N at
// m = 1, zero at m >= 2).  The constant and top-degree rows of the system are
// identities and are verified, then dropped, leaving a square solve.
//
// chi_+(u) = sum_m t^{2m} F_m(u) prod_nu (q^{2(m+1)} u / u_nu ; q^2)_inf,
// and chi_- comes from the mirrored model (x -> -x) evaluated at 1/u.

#include "sg/model.hpp"

namespace sg {

struct BootstrapResult {
    ModularParams p;
    ModelPolys polys;
    int order = 0;
    std::vector<CPoly> F;                 // F[0] = 1 .. F[order]
    std::vector<CPoly> T;                 // T[0] = T0 .. T[order]
    std::vector<double> order_residuals;  // per-order consistency residual
};

// Runs the expansion through t^{2*order}.  Guards: ModelSpec::validate();
// ResonanceError when q^{2k} u_nu collides with another root for some
// 0 <= k <= order+1 (the suffix products then degenerate); PrecisionError when
// an identity row or a solved system's residual exceeds tol.
BootstrapResult bootstrap_run(const ModelSpec& spec, const ModularParams& p,
                              int order, double tol = 1e-10);

cd chi_plus(const BootstrapResult& run, cd u);

// The +/- pair: the given model and its mirror solved side by side.
struct ChiPair {
    BootstrapResult plus;
    BootstrapResult minus;
};

ChiPair make_chi_pair(const ModelSpec& spec, const ModularParams& p, int order,
                      double tol = 1e-10);

cd chi_plus(const ChiPair& chi, cd u);
cd chi_minus(const ChiPair& chi, cd u); // mirrored chi_+ at 1/u

// W(u) = chi_+(u/q^2) chi_-(u)
//        - t^2 (-q)^N (prod_nu a_nu) A(u) B'(q^2/u) chi_+(u) chi_-(u/q^2);
// quasi-periodic: W(u) = (-u)^N W(q^2 u).
cd wronskian(const ChiPair& chi, cd u);

// Zeros of W near the input roots.  Each input root is Newton-refined to the
// nearest zero of W; the relative drifts |z_nu / u_nu - 1| are taken against
// those nearest representatives (a q^2-ladder-rung move would report an O(1)
// artefact, not the genuine deformation of the zero).  The reported `roots`
// list holds the annulus representatives |q|^2 < |z| <= 1, sorted by
// (modulus, argument).  varrho is the proportionality constant of the
// theta-product representation W = varrho prod_nu theta1(u / z_nu), fitted at
// one probe point and checked at another; the fit uses the centred (nearest)
// representatives because only prod z_nu = 1 makes the quotient constant.
// Requires centred roots (prod u_nu = 1); RootCountError if the zeros found
// do not give N distinct annulus points.
struct RootDrift {
    std::vector<cd> roots;       // annulus representatives, sorted
    std::vector<double> drifts;  // |z_nu / u_nu - 1|, input-root order
    cd varrho;
    double fit_residual;
};
RootDrift w_root_drift(const ChiPair& chi, double tol = 1e-12, int max_iter = 60);

// Limit formula for the n-th order relative drift coefficient of the zero
// family u = q^{-2n} u_gamma of chi_+ (0-based gamma).
cd delta_prime(const BootstrapResult& run, int gamma, int n);

// Newton-extracts the zero of chi_+ near q^{-2n} u_gamma and returns the
// measured u_gamma / u_{gamma,n} - 1 next to its prediction t^{2n} Delta'.
struct ZeroAsymptotics {
    cd zero;      // located zero of chi_+
    cd extracted; // u_gamma / (q^{2n} zero) - 1
    cd predicted; // t^{2n} delta_prime
};
ZeroAsymptotics zero_asymptotics(const ChiPair& chi, int gamma, int n);

} // namespace sg
