#pragma once
// Finite-N quantisation layer: the two Baxter-type solutions Q1/Q2 assembled
// from the primal and dual bootstrap states, the quantisation ratio whose
// value at every root must be one common constant xi, and a Newton solver
// for the root configuration.
//
// Conventions.  u = e^{2 pi b x}, ustar = e^{2 pi x / b}; "dual" objects are
// honest re-runs of the whole bootstrap with b -> 1/b (star(params)), never
// conjugation shortcuts — for real data conjugation is what the tests check.
// All model data (alpha, beta, tau, roots) is real: that is the validated
// regime, in which |ratio| = 1 on the real axis and the solver can work with
// the phase alone.

#include "sg/bootstrap.hpp"

namespace sg {

// Primal + dual bootstrap states bound to one root configuration, plus the
// derived solver parameters.
struct SolveContext {
    ModelSpec spec;
    ModularParams p;   // primal bundle (b = e^{i theta})
    ModularParams ps;  // starred bundle (b -> 1/b)
    int order = 0;     // truncation order M of the t^2 expansion
    ChiPair primal;    // chi_+/chi_- at (q, t^2)
    ChiPair dual;      // chi_+/chi_- at (qstar, tstar^2)
    double mu = 0.0;   // (1/N) sum alpha_nu
    cd tau_prime;      // 2 tau / N + mu + i eta
    cd t, tstar;       // e^{2 pi b tau}, e^{2 pi tau / b}
};

// Runs the four bootstrap expansions (plus/minus, primal/dual).  Beyond
// ModelSpec::validate(), requires the centering
// (1/N) sum alpha = mu = -(1/N) sum beta (ValidationError otherwise).
SolveContext make_solve_context(const ModelSpec& spec, int order,
                                double tol = 1e-10);

// The two solutions of the transfer-matrix difference equations:
//   Q1(x) = e^{-sum_nu log phi(x - alpha_nu)}
//           chi_+(u) chi_-^d(ustar) / W^d(ustar),
//   Q2(x) = e^{2 pi i tau' x N - sum_nu log phi(beta_nu - x)}
//           chi_-(u) chi_+^d(ustar) / W^d(qstar^2 ustar),
// superscript d marking dual-state evaluation.  NearPoleError when x sits on
// a singularity of a phi prefactor or too close to a dual Wronskian zero.
cd q1(const SolveContext& ctx, cd x);
cd q2(const SolveContext& ctx, cd x);

// The quantisation ratio R(x) = lim Q1/Q2 with the two dual Wronskian
// factors cancelled analytically: the theta-type quasi-periodicity
// W(q^2 u) = (-u)^{-N} W(u) turns their quotient into (-ustar)^{-N}, leaving
// a ratio that is regular at the roots.  Evaluable at any real x off the
// phi-prefactor singularities.
cd bae_ratio_at(const SolveContext& ctx, double x);

// R at root gamma (0-based).  Verifies that the dual Wronskian zero nearest
// ustar(x_gamma) is simple (DegenerateRootError), then cross-checks the
// analytic form against the literal Q1/Q2 quotient (Wronskian denominators
// numerically present) at x_gamma + eps, eps in {1e-4, 1e-5}; PrecisionError
// when the two routes disagree beyond 1e-6.
cd bae_ratio(const SolveContext& ctx, int gamma);

// Symmetric-case parity combination at real x (requires beta = -alpha as
// multisets; ValidationError otherwise):
//   e^{-2 pi i tau' x N} (-ustar)^{-N}
//   prod_nu [phi(-alpha_nu - x) / phi(x - alpha_nu)]
//   * chi_+(u) chi_+^d(1/ustar) / (chi_+(1/u) chi_+^d(ustar)),
// built from the plus-solutions alone (no mirror run), which makes it an
// independent route to xi: unimodular on the real axis, +-1 at solved roots.
cd parity_lhs(const SolveContext& ctx, double x);

// Solved root configuration.
struct BetheState {
    std::vector<double> roots;   // sum = 0
    cd xi;                       // common ratio at the roots
    cd varrho;                   // theta-product constant fitted by the drift scan
    double residual = 0.0;       // max |log(R_gamma / R_N)| at the solution
    double lattice_residual = 0.0; // ratio condition at x_gamma - 2 sigma
    RootDrift drift;             // Wronskian zero diagnostics
    int iterations = 0;
    int order = 0;               // truncation order used
};

// Newton iteration on x_1..x_{N-1} (x_N = -sum keeps the configuration
// centred) with residuals g_gamma = log R(x_gamma) - log R(x_N).  The
// imaginary parts are unwound along the real axis (never folded), and the
// quantisation branch — the multiple of 2 pi each phase difference must
// reach, i.e. the mode-number content of the state — is locked to the one
// nearest the seed.  Each iteration and each numerical Jacobian column
// (central differences, step 1e-6) rebuilds the four bootstrap states.
// Seeds must be distinct and centred (ValidationError).
// NonConvergenceError after max_iter, or earlier if a pair of roots is
// collapsing (the difference equation admits no degenerate double root);
// PrecisionError if the converged state fails the lattice spot-check of the
// ratio condition at x_gamma - 2 sigma.
BetheState solve_bae(const ModelSpec& spec, const std::vector<double>& seed,
                     int order, int max_iter = 30, double tol = 1e-8);

// Root seeds from the thermodynamic ground-state density of the homogeneous
// model at the spec's mu: the N midpoint quantiles CDF(x_nu) = (nu - 1/2)/N,
// recentred to sum zero.
std::vector<double> quantile_seed(const ModelSpec& spec);

// Relative residual of one line of the transfer-matrix difference equation
// at Q = Q1 - xi Q2:
//   line 1:  t^-1 A(u) Q(x - i b) + t B(u) Q(x + i b) - T(u) Q(x),
//   line 2 the starred counterpart with b -> 1/b shifts and dual data;
// normalised by the largest of the three terms.
double tq_residual(const SolveContext& ctx, cd xi, double x,
                   bool starred_line = false);

} // namespace sg
