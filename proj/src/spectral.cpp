#include "sg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "sg/phi.hpp"
#include "sg/thermo.hpp"

namespace sg {

namespace {

// log phi with the failure modes the solver can actually hit mapped onto
// NearPoleError: the real-axis singularity lattice x = (2n+1) sigma is
// pre-checked with a wider margin than the product's own |1 - w| guard, and
// a SingularityError escaping the product (off-axis arguments) is rewrapped
// so callers see one exception type for "argument too close to a pole".
cd guarded_log_phi(cd z, const ModularParams& p) {
    if (std::abs(z.imag()) < 1e-12) {
        const double r = std::remainder(z.real() - p.sigma, 2.0 * p.sigma);
        if (std::abs(r) < 1e-9) {
            std::ostringstream os;
            os << "phi prefactor singular at offset " << z.real()
               << " (odd multiple of sigma)";
            throw NearPoleError(os.str());
        }
    }
    try {
        return log_phi(z, p);
    } catch (const SingularityError& e) {
        throw NearPoleError(std::string("phi prefactor: ") + e.what());
    }
}

// Shared denominator guard for Q1/Q2: the dual Wronskian value must not be
// negligible against the chi product it divides.
void check_w_denominator(cd w, double scale, const char* who) {
    if (std::abs(w) < 1e-9 * std::max(1.0, scale)) {
        std::ostringstream os;
        os << who << ": dual Wronskian denominator " << std::abs(w)
           << " too close to a zero";
        throw NearPoleError(os.str());
    }
}

cd ipow(cd z, int n) {
    cd r = 1.0;
    cd base = n >= 0 ? z : 1.0 / z;
    for (int k = std::abs(n); k > 0; --k) r *= base;
    return r;
}

// Same central-difference Newton as the Wronskian drift scan uses; kept local
// because the two translation units guard different failure modes around it.
cd newton_zero(const std::function<cd(cd)>& f, cd z0, double tol, int max_iter,
               const char* what) {
    cd z = z0;
    for (int it = 0; it < max_iter; ++it) {
        const cd fz = f(z);
        const cd h = z * 1e-7;
        const cd fp = (f(z + h) - f(z - h)) / (2.0 * h);
        if (fp == cd(0.0))
            throw NonConvergenceError(std::string(what) + ": vanishing derivative");
        const cd dz = -fz / fp;
        z += dz;
        if (std::abs(dz) < tol * std::abs(z)) return z;
    }
    throw NonConvergenceError(std::string(what) + ": Newton budget exhausted");
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Principal-branch phase difference folded into (-pi, pi].
} // namespace

SolveContext make_solve_context(const ModelSpec& spec, int order, double tol) {
    spec.validate();
    const double mu = mean(spec.alpha);
    if (std::abs(mu + mean(spec.beta)) > 1e-12)
        throw ValidationError(
            "make_solve_context: mean beta must equal -mean alpha");

    SolveContext ctx;
    ctx.spec = spec;
    ctx.p = make_modular_params(spec.theta);
    ctx.ps = star(ctx.p);
    ctx.order = order;
    ctx.mu = mu;
    ctx.tau_prime = cd(2.0 * spec.tau / spec.N + mu, ctx.p.eta);
    ctx.t = std::exp(2.0 * pi * ctx.p.b * spec.tau);
    ctx.tstar = std::exp(2.0 * pi * ctx.p.binv * spec.tau);
    ctx.primal = make_chi_pair(spec, ctx.p, order, tol);
    ctx.dual = make_chi_pair(spec, ctx.ps, order, tol);
    return ctx;
}

cd q1(const SolveContext& ctx, cd x) {
    const auto& p = ctx.p;
    cd lg = 0.0;
    for (double a : ctx.spec.alpha) lg -= guarded_log_phi(x - a, p);
    const cd u = uvar(p, x);
    const cd us = ustar(p, x);
    const cd chis = chi_plus(ctx.primal, u) * chi_minus(ctx.dual, us);
    const cd wd = wronskian(ctx.dual, us);
    check_w_denominator(wd, std::abs(chis), "q1");
    return std::exp(lg) * chis / wd;
}

cd q2(const SolveContext& ctx, cd x) {
    const auto& p = ctx.p;
    cd lg = 2.0 * pi * iu * ctx.tau_prime * x * static_cast<double>(ctx.spec.N);
    for (double be : ctx.spec.beta) lg -= guarded_log_phi(cd(be) - x, p);
    const cd u = uvar(p, x);
    const cd us = ustar(p, x);
    const cd chis = chi_minus(ctx.primal, u) * chi_plus(ctx.dual, us);
    const cd wd = wronskian(ctx.dual, p.qstar2 * us);
    check_w_denominator(wd, std::abs(chis), "q2");
    return std::exp(lg) * chis / wd;
}

cd bae_ratio_at(const SolveContext& ctx, double x) {
    const auto& p = ctx.p;
    const int N = ctx.spec.N;
    cd lg = -2.0 * pi * iu * ctx.tau_prime * x * static_cast<double>(N);
    for (double be : ctx.spec.beta) lg += guarded_log_phi(cd(be - x), p);
    for (double a : ctx.spec.alpha) lg -= guarded_log_phi(cd(x - a), p);
    const cd u = uvar(p, cd(x));
    const cd us = ustar(p, cd(x));
    const cd num = chi_plus(ctx.primal, u) * chi_minus(ctx.dual, us);
    const cd den = chi_minus(ctx.primal, u) * chi_plus(ctx.dual, us);
    return std::exp(lg) * ipow(-us, -N) * num / den;
}

cd bae_ratio(const SolveContext& ctx, int gamma) {
    if (gamma < 0 || gamma >= ctx.spec.N)
        throw DomainError("bae_ratio: root index out of range");
    const double xg = ctx.spec.roots[static_cast<size_t>(gamma)];

    // The analytic cancellation of the two dual Wronskian factors assumes the
    // zero their quotient straddles is simple; verify that before trusting it.
    auto W = [&](cd v) { return wronskian(ctx.dual, v); };
    const cd z = newton_zero(W, ustar(ctx.p, cd(xg)), 1e-12, 60, "bae_ratio");
    const double delta = std::abs(z) * 1e-6;
    const cd wp = W(z + delta);
    const cd wm = W(z - delta);
    const cd deriv = (wp - wm) / (2.0 * delta);
    if (std::abs(deriv) * delta <
        0.2 * std::max(std::abs(wp), std::abs(wm))) {
        std::ostringstream os;
        os << "bae_ratio: dual Wronskian zero near ustar(x_" << gamma
           << ") is not simple";
        throw DegenerateRootError(os.str());
    }

    const cd val = bae_ratio_at(ctx, xg);

    // Literal route: Q1/Q2 with the Wronskian denominators numerically
    // present must reproduce the analytic cancellation pointwise at small
    // offsets from the root.  Catches any mismatch between the
    // quasi-periodicity identity used analytically and the truncated chi
    // products actually evaluated.
    for (double eps : {1e-4, 1e-5}) {
        const cd lit = q1(ctx, cd(xg + eps)) / q2(ctx, cd(xg + eps));
        const cd ana = bae_ratio_at(ctx, xg + eps);
        if (std::abs(lit - ana) > 1e-6 * std::max(1.0, std::abs(ana))) {
            std::ostringstream os;
            os << "bae_ratio: literal Q1/Q2 and the analytic form disagree by "
               << std::abs(lit - ana) << " at root " << gamma << " + " << eps;
            throw PrecisionError(os.str());
        }
    }
    return val;
}

cd parity_lhs(const SolveContext& ctx, double x) {
    std::vector<double> a = ctx.spec.alpha;
    std::vector<double> nb = ctx.spec.beta;
    for (double& v : nb) v = -v;
    std::sort(a.begin(), a.end());
    std::sort(nb.begin(), nb.end());
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - nb[i]) > 1e-12)
            throw ValidationError(
                "parity_lhs: requires the symmetric case beta = -alpha");

    const auto& p = ctx.p;
    const int N = ctx.spec.N;
    cd lg = -2.0 * pi * iu * ctx.tau_prime * x * static_cast<double>(N);
    for (double al : ctx.spec.alpha)
        lg += guarded_log_phi(cd(-al - x), p) - guarded_log_phi(cd(x - al), p);
    const cd u = uvar(p, cd(x));
    const cd us = ustar(p, cd(x));
    const cd num = chi_plus(ctx.primal, u) * chi_plus(ctx.dual, 1.0 / us);
    const cd den = chi_plus(ctx.primal, 1.0 / u) * chi_plus(ctx.dual, us);
    return std::exp(lg) * ipow(-us, -N) * num / den;
}

namespace {

// One evaluation of the quantisation phases at a root configuration: builds
// the full context and returns log R(x_gamma) - log R(x_ref) for
// Phase of R unwound along the real segment from a to b: accumulated folded
// increments over a grid fine enough that every increment is unambiguous.
// Near a genuine solution the winding between adjacent roots is close to
// 2 pi times the gap in mode numbers, so the folded phase alone cannot tell
// a one-mode separation from a coalescing pair; the unwound value can.
double unwind_seg(const SolveContext& ctx, double a, double b) {
    if (a == b) return 0.0;
    double total = 0.0;
    cd prev = bae_ratio_at(ctx, a);
    const double dx0 = 0.04 * (b > a ? 1.0 : -1.0);
    double x = a;
    while ((b - x) * dx0 > 0.0) {
        double step = dx0;
        if ((b - (x + step)) * dx0 < 0.0) step = b - x;
        for (;;) {
            const cd next = bae_ratio_at(ctx, x + step);
            const double d = std::arg(next / prev);
            if (std::abs(d) < 0.9 || std::abs(step) < 1e-7) {
                total += d;
                prev = next;
                x += step;
                break;
            }
            step *= 0.5;
        }
    }
    return total;
}

// gamma < N-1, with the reference taken at the last root.  The unwound
// phases drive the Newton iteration; the real parts are pure noise on the
// real axis (|R| = 1) and only enter the reported residual.
struct PhaseEval {
    SolveContext ctx;
    std::vector<cd> ratios;  // R at every root
    std::vector<double> g;   // unwound phase differences, size N-1
    std::vector<double> re;  // log |R_gamma / R_ref|, size N-1
};

PhaseEval eval_phases(const ModelSpec& spec, const std::vector<double>& roots,
                      int order, double tol) {
    ModelSpec work = spec;
    work.roots = roots;
    PhaseEval ev;
    ev.ctx = make_solve_context(work, order, tol);
    const int N = spec.N;
    ev.ratios.reserve(static_cast<size_t>(N));
    for (int g = 0; g < N; ++g)
        ev.ratios.push_back(bae_ratio_at(ev.ctx, roots[static_cast<size_t>(g)]));
    const cd ref = ev.ratios.back();
    const double xref = roots.back();
    for (int g = 0; g + 1 < N; ++g) {
        const cd quot = ev.ratios[static_cast<size_t>(g)] / ref;
        ev.g.push_back(unwind_seg(ev.ctx, xref, roots[static_cast<size_t>(g)]));
        ev.re.push_back(std::log(std::abs(quot)));
    }
    return ev;
}

// Residual of the quantisation condition: distance of every unwound phase
// difference to its assigned multiple of 2 pi (the mode numbers fixed at the
// seed), combined with the modulus mismatch.
double phase_residual(const std::vector<double>& g,
                      const std::vector<double>& re,
                      const std::vector<double>& targets) {
    double r = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
        r = std::max(r, std::abs(cd(re[i], g[i] - targets[i])));
    return r;
}

} // namespace

BetheState solve_bae(const ModelSpec& spec, const std::vector<double>& seed,
                     int order, int max_iter, double tol) {
    const int N = spec.N;
    if (static_cast<int>(seed.size()) != N)
        throw ValidationError("solve_bae: seed size does not match N");
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (std::abs(seed[static_cast<size_t>(i)] -
                         seed[static_cast<size_t>(j)]) < 1e-6)
                throw ValidationError("solve_bae: seed roots must be distinct");
    if (std::abs(mean(seed)) > 1e-9)
        throw ValidationError("solve_bae: seed must be centred (sum = 0)");

    const double boot_tol = 1e-10;
    std::vector<double> xs = seed;
    {   // recentre exactly; the validation above only bounds the drift
        const double m = mean(xs);
        for (double& x : xs) x -= m;
    }

    BetheState st;
    st.order = order;
    int iterations = 0;
    double residual = 0.0;

    if (N == 1) {
        // x_1 = 0 is forced by the centring; nothing to iterate.
        xs[0] = 0.0;
    } else {
        bool converged = false;
        PhaseEval ev = eval_phases(spec, xs, order, boot_tol);
        // Quantisation branch: each unwound phase difference must land on a
        // multiple of 2 pi, and which multiple is the mode-number content of
        // the state.  Lock the branch nearest the seed once; re-rounding per
        // iteration would let Newton slide towards a coalescing pair, whose
        // folded phases also vanish.
        std::vector<double> targets(ev.g.size());
        for (size_t i = 0; i < ev.g.size(); ++i)
            targets[i] = 2.0 * pi * std::round(ev.g[i] / (2.0 * pi));
        residual = phase_residual(ev.g, ev.re, targets);
        for (int it = 0; it < max_iter && !converged; ++it) {
            if (residual <= tol) {
                converged = true;
                break;
            }
            // Numerical Jacobian of the phases in the N-1 free roots (the
            // last root is always recomputed as -sum of the others).  The
            // unwound phases are continuous in the roots, so plain central
            // differences need no branch realignment.
            const int n = N - 1;
            const double h = 1e-6;
            CMatrix J(n);
            auto perturbed = [&](int j, double step) {
                std::vector<double> ys(xs.begin(), xs.end() - 1);
                ys[static_cast<size_t>(j)] += step;
                double s = 0.0;
                for (double y : ys) s += y;
                ys.push_back(-s);
                return eval_phases(spec, ys, order, boot_tol);
            };
            for (int j = 0; j < n; ++j) {
                const PhaseEval pp = perturbed(j, +h);
                const PhaseEval pm = perturbed(j, -h);
                for (int i = 0; i < n; ++i)
                    J.at(i, j) = (pp.g[static_cast<size_t>(i)] -
                                  pm.g[static_cast<size_t>(i)]) /
                                 (2.0 * h);
            }
            std::vector<cd> rhs(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
                rhs[static_cast<size_t>(i)] =
                    targets[static_cast<size_t>(i)] - ev.g[static_cast<size_t>(i)];
            const LinearSolution sol = linear_solve(J, rhs);

            // Damped update.  The q^2-ladder resonance walls of the
            // bootstrap sit at root coalescence (and at gaps of 2 k sigma),
            // so first cap the step against closing any current gap by more
            // than half, then halve it while the folded residual grows or
            // the trial configuration lands on a wall.
            std::vector<double> step(static_cast<size_t>(N), 0.0);
            for (int j = 0; j < n; ++j) {
                step[static_cast<size_t>(j)] = sol.x[static_cast<size_t>(j)].real();
                step[static_cast<size_t>(N - 1)] -= step[static_cast<size_t>(j)];
            }
            double min_gap = 1e300, closure = 0.0;
            for (int i = 0; i < N; ++i)
                for (int j = i + 1; j < N; ++j) {
                    min_gap = std::min(min_gap, std::abs(xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(j)]));
                    closure = std::max(closure, std::abs(step[static_cast<size_t>(i)] - step[static_cast<size_t>(j)]));
                }
            double scale = 1.0;
            if (closure > 0.5 * min_gap) scale = 0.5 * min_gap / closure;
            bool accepted = false;
            for (int back = 0; back < 8 && !accepted; ++back, scale *= 0.5) {
                std::vector<double> ys(xs.begin(), xs.end() - 1);
                for (int j = 0; j < n; ++j)
                    ys[static_cast<size_t>(j)] +=
                        scale * sol.x[static_cast<size_t>(j)].real();
                double s = 0.0;
                for (double y : ys) s += y;
                ys.push_back(-s);
                PhaseEval trial;
                try {
                    trial = eval_phases(spec, ys, order, boot_tol);
                } catch (const ResonanceError&) {
                    continue; // wall hit: retry closer to the current point
                }
                const double trial_res =
                    phase_residual(trial.g, trial.re, targets);
                if (trial_res < residual || back == 7) {
                    xs = ys;
                    ev = std::move(trial);
                    residual = trial_res;
                    accepted = true;
                }
            }
            if (!accepted)
                throw NonConvergenceError(
                    "solve_bae: step rejected eight times (resonance walls "
                    "hem in the current configuration)");
            // A pair of roots collapsing onto each other produces a residual
            // that shrinks with the gap, so the iteration would otherwise
            // "converge" onto a degenerate double root that the difference
            // equation cannot support.  Fail instead.
            double gap_now = 1e300, span = 0.0;
            for (int i = 0; i < N; ++i) {
                span = std::max(span, std::abs(xs[static_cast<size_t>(i)]));
                for (int j = i + 1; j < N; ++j)
                    gap_now = std::min(gap_now,
                                       std::abs(xs[static_cast<size_t>(i)] -
                                                xs[static_cast<size_t>(j)]));
            }
            if (gap_now < 1e-5 * (1.0 + span)) {
                std::ostringstream os;
                os << "solve_bae: roots are coalescing (gap " << gap_now
                   << " after " << iterations + 1
                   << " iterations); the seed lies in the basin of a "
                      "degenerate configuration";
                throw NonConvergenceError(os.str());
            }
            ++iterations;
        }
        if (residual > tol) {
            std::ostringstream os;
            os << "solve_bae: residual " << residual << " after " << iterations
               << " iterations (tol " << tol << ")";
            throw NonConvergenceError(os.str());
        }
    }

    ModelSpec solved = spec;
    solved.roots = xs;
    SolveContext ctx = make_solve_context(solved, order, boot_tol);

    st.roots = xs;
    st.iterations = iterations;
    st.residual = residual;
    st.xi = bae_ratio(ctx, N - 1);

    // The quantisation condition propagates down the 2 sigma lattice; a
    // converged configuration must reproduce xi at the shifted points too.
    double lat = 0.0;
    for (int g = 0; g < N; ++g) {
        const cd r = bae_ratio_at(ctx, xs[static_cast<size_t>(g)] - 2.0 * ctx.p.sigma);
        lat = std::max(lat, std::abs(std::log(r / st.xi)));
    }
    st.lattice_residual = lat;
    // Floors independent of how tightly the phases were solved: the
    // dilogarithm quadrature loses accuracy when a shifted point brings an
    // argument near the pole lattice (observed up to ~1e-7 at pole distance
    // ~0.02), and the lattice propagation of the ratio condition is exact
    // only for the resummed chi series (defect ~ |t^2|^{M+1}).  A bogus
    // configuration — one solving the N-1 difference conditions on the
    // wrong branch — shows up at O(0.1) and is still caught.
    const double truncation = std::pow(std::abs(ctx.primal.plus.polys.t2),
                                       ctx.order + 1);
    if (lat > std::max({10.0 * residual, 10.0 * tol, truncation, 1e-6})) {
        std::ostringstream os;
        os << "solve_bae: lattice spot-check failed, |log(R(x - 2 sigma)/xi)| = "
           << lat;
        throw PrecisionError(os.str());
    }

    st.drift = w_root_drift(ctx.primal);
    st.varrho = st.drift.varrho;
    return st;
}

std::vector<double> quantile_seed(const ModelSpec& spec) {
    spec.validate(/*require_roots=*/false);
    const ModularParams p = make_modular_params(spec.theta);
    const double mu = mean(spec.alpha);
    // Thermodynamic ground-state distribution of the homogeneous model:
    // CDF(x) = y(x - mu) + y(x + mu), increasing from 0 to 1.
    auto cdf = [&](double x) {
        return kernel_y(x - mu, p) + kernel_y(x + mu, p);
    };
    const int N = spec.N;
    std::vector<double> xs(static_cast<size_t>(N));
    for (int nu = 1; nu <= N; ++nu) {
        // Midpoint rule: the nu-th root carries the (nu - 1/2)-th unit of
        // accumulated density, matching the half-integer offset of the
        // quantisation phases.  Solved configurations sit at these CDF
        // values to a few percent already at N = 4.
        const double target = (nu - 0.5) / N;
        double lo = -20.0, hi = 20.0;
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            (cdf(mid) < target ? lo : hi) = mid;
        }
        xs[static_cast<size_t>(nu - 1)] = 0.5 * (lo + hi);
    }
    const double m = mean(xs);
    for (double& x : xs) x -= m;
    return xs;
}

double tq_residual(const SolveContext& ctx, cd xi, double x,
                   bool starred_line) {
    auto Q = [&](cd z) { return q1(ctx, z) - xi * q2(ctx, z); };
    const auto& p = ctx.p;

    cd term_minus, term_plus, rhs;
    if (!starred_line) {
        const auto& run = ctx.primal.plus;
        const cd u = uvar(p, cd(x));
        term_minus = run.polys.A.eval(u) / ctx.t * Q(cd(x) - iu * p.b);
        term_plus = ctx.t * run.polys.B.eval(u) * Q(cd(x) + iu * p.b);
        cd tsum = 0.0, t2m = 1.0;
        for (int m = 0; m <= ctx.order; ++m, t2m *= run.polys.t2)
            tsum += t2m * run.T[static_cast<size_t>(m)].eval(u);
        rhs = tsum / ctx.t * Q(cd(x));
    } else {
        // Starred line: shifts by i/b, dual polynomial data at ustar, and the
        // argument offsets [A(q^2 u)]^* = A^*(qstar^2 ustar),
        // [B(u/q^2)]^* = B^*(ustar/qstar^2).
        const auto& run = ctx.dual.plus;
        const cd us = ustar(p, cd(x));
        term_minus = run.polys.A.eval(p.qstar2 * us) / ctx.tstar *
                     Q(cd(x) - iu * p.binv);
        term_plus = ctx.tstar * run.polys.B.eval(us / p.qstar2) *
                    Q(cd(x) + iu * p.binv);
        cd tsum = 0.0, t2m = 1.0;
        for (int m = 0; m <= ctx.order; ++m, t2m *= run.polys.t2)
            tsum += t2m * run.T[static_cast<size_t>(m)].eval(us);
        rhs = tsum / ctx.tstar * Q(cd(x));
    }
    const double scale = std::max(
        {std::abs(term_minus), std::abs(term_plus), std::abs(rhs)});
    return std::abs(term_minus + term_plus - rhs) / scale;
}

} // namespace sg
