#include "sg/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace sg {

namespace {

// rows x cols dense scratch matrix for the per-order assembly (the solved
// system is square only after the two identity rows are dropped).
struct Scratch {
    int rows, cols;
    std::vector<cd> a;
    Scratch(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    cd& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    cd at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

void add_poly_to_column(Scratch& m, int col, const CPoly& p) {
    for (size_t i = 0; i < p.c.size(); ++i)
        m.at(static_cast<int>(i), col) += p.c[i];
}

void add_poly_to_vec(std::vector<cd>& v, const CPoly& p, cd sign) {
    for (size_t i = 0; i < p.c.size(); ++i) v[i] += sign * p.c[i];
}

cd ipow(cd z, int n) {
    cd r = 1.0;
    cd base = n >= 0 ? z : 1.0 / z;
    for (int k = std::abs(n); k > 0; --k) r *= base;
    return r;
}

} // namespace

BootstrapResult bootstrap_run(const ModelSpec& spec, const ModularParams& p,
                              int order, double tol) {
    if (order < 0) throw ValidationError("bootstrap_run: order must be >= 0");
    BootstrapResult run;
    run.p = p;
    run.polys = model_polys(spec, p);
    run.order = order;
    const int N = spec.N;
    const cd q2 = p.q2;
    const auto& uv = run.polys.uv;

    // Resonance guard: the assembly divides the root lattice into disjoint
    // q^2 ladders; a collision q^{2k} u_nu = u_kappa collapses two of them.
    for (int k = 0; k <= order + 1; ++k) {
        const cd q2k = ipow(q2, k);
        for (int nu = 0; nu < N; ++nu) {
            for (int ka = 0; ka < N; ++ka) {
                if (k == 0 && nu == ka) continue;
                if (std::abs(q2k * uv[nu] - uv[ka]) < 1e-8 * std::abs(uv[ka])) {
                    std::ostringstream msg;
                    msg << "bootstrap_run: resonant roots, q^(2*" << k
                        << ") u_" << nu << " collides with u_" << ka;
                    throw ResonanceError(msg.str());
                }
            }
        }
    }

    CPoly one;
    one.c = {cd(1.0)};
    run.F = {one};
    run.T = {run.polys.T0};

    for (int m = 1; m <= order; ++m) {
        const int nF = m * N;
        const int nT = N - 1;
        const int rows = (m + 1) * N + 1;
        Scratch mat(rows, nF + nT);

        const CPoly T0m = q_scale(run.polys.T0, ipow(q2, m));
        // suffix products Pi[r] = prod_{j=r}^{m} T0(q^{2j} u)
        std::vector<CPoly> Pi(m + 2);
        Pi[m + 1] = one;
        for (int r = m; r >= 1; --r)
            Pi[r] = pmul(q_scale(run.polys.T0, ipow(q2, r)), Pi[r + 1]);

        for (int j = 1; j <= nF; ++j) {
            const CPoly col = psub(pscale(pshift_deg(T0m, j), ipow(q2, -j)),
                                   pshift_deg(run.polys.T0, j));
            add_poly_to_column(mat, j - 1, col);
        }
        for (int l = 1; l <= nT; ++l)
            add_poly_to_column(mat, nF + l - 1, pscale(pshift_deg(Pi[1], l), cd(-1.0)));

        std::vector<cd> rhs(rows, cd(0.0));
        const CPoly ABF = pmul(pmul(q_scale(run.polys.A, q2), run.polys.B),
                               q_scale(run.F[m - 1], q2));
        add_poly_to_vec(rhs, ABF, cd(-1.0));
        for (int k = 1; k < m; ++k)
            add_poly_to_vec(rhs, pmul(pmul(run.T[k], run.F[m - k]), Pi[m - k + 1]),
                            cd(1.0));
        if (m == 1) {
            CPoly ends;
            ends.c.assign(N + 1, cd(0.0));
            ends.c[0] = 1.0;
            ends.c[N] = (N % 2 == 0) ? 1.0 : -1.0;
            add_poly_to_vec(rhs, pmul(ends, Pi[1]), cd(1.0));
        }

        // The constant and top-degree rows must vanish identically; anything
        // else signals a broken assembly or parameters at the edge of
        // representability.
        double id_resid = std::max(std::abs(rhs[0]), std::abs(rhs[rows - 1]));
        for (int j = 0; j < nF + nT; ++j) {
            id_resid = std::max(id_resid, std::abs(mat.at(0, j)));
            id_resid = std::max(id_resid, std::abs(mat.at(rows - 1, j)));
        }
        if (id_resid > tol) {
            std::ostringstream msg;
            msg << "bootstrap_run: identity rows violated at order " << m
                << " (residual " << id_resid << ")";
            throw PrecisionError(msg.str());
        }

        CMatrix sq(nF + nT);
        std::vector<cd> sq_rhs(nF + nT);
        for (int i = 1; i < rows - 1; ++i) {
            for (int j = 0; j < nF + nT; ++j) sq.at(i - 1, j) = mat.at(i, j);
            sq_rhs[i - 1] = rhs[i];
        }
        // The systems are q^2-graded, with pivots legitimately spanning many
        // decades; singularity policing is done here via the row-wise backward
        // error, not inside the solver.
        const LinearSolution sol = linear_solve(sq, sq_rhs, 0.0);

        // componentwise backward error over the interior rows (the identity
        // rows were checked in absolute terms above)
        double back_err = 0.0;
        for (int i = 1; i < rows - 1; ++i) {
            cd acc = -rhs[i];
            double den = std::abs(rhs[i]);
            for (int j = 0; j < nF + nT; ++j) {
                acc += mat.at(i, j) * sol.x[j];
                den += std::abs(mat.at(i, j)) * std::abs(sol.x[j]);
            }
            back_err = std::max(back_err, std::abs(acc) / std::max(den, 1e-30));
        }
        if (back_err > tol) {
            std::ostringstream msg;
            msg << "bootstrap_run: order-" << m << " backward error " << back_err
                << " exceeds tol " << tol;
            throw PrecisionError(msg.str());
        }
        run.order_residuals.push_back(std::max(id_resid, back_err));

        CPoly Fm;
        Fm.c.assign(nF + 1, cd(0.0));
        for (int j = 1; j <= nF; ++j) Fm.c[j] = sol.x[j - 1];
        CPoly Tm;
        Tm.c.assign(N + 1, cd(0.0));
        if (m == 1) {
            Tm.c[0] = 1.0;
            Tm.c[N] = (N % 2 == 0) ? 1.0 : -1.0;
        }
        for (int l = 1; l <= nT; ++l) Tm.c[l] = sol.x[nF + l - 1];
        run.F.push_back(Fm);
        run.T.push_back(Tm);
    }
    return run;
}

cd chi_plus(const BootstrapResult& run, cd u) {
    const cd q2 = run.p.q2;
    cd t2m = 1.0;
    cd q2m1 = q2; // q^{2(m+1)}
    cd sum = 0.0;
    for (int m = 0; m <= run.order; ++m) {
        cd tail = 1.0;
        for (const cd& unu : run.polys.uv) tail *= qpoch(q2m1 * u / unu, q2);
        sum += t2m * run.F[m].eval(u) * tail;
        t2m *= run.polys.t2;
        q2m1 *= q2;
    }
    return sum;
}

ChiPair make_chi_pair(const ModelSpec& spec, const ModularParams& p, int order,
                      double tol) {
    return {bootstrap_run(spec, p, order, tol),
            bootstrap_run(mirror_model(spec), p, order, tol)};
}

cd chi_plus(const ChiPair& chi, cd u) { return chi_plus(chi.plus, u); }

cd chi_minus(const ChiPair& chi, cd u) { return chi_plus(chi.minus, 1.0 / u); }

cd wronskian(const ChiPair& chi, cd u) {
    const cd q2 = chi.plus.p.q2;
    cd pref = chi.plus.polys.t2;
    for (const cd& a : chi.plus.polys.av) pref *= -chi.plus.p.q * a;
    return chi_plus(chi, u / q2) * chi_minus(chi, u)
           - pref * chi.plus.polys.A.eval(u) * chi.plus.polys.Bprime.eval(u / q2)
                 * chi_plus(chi, u) * chi_minus(chi, u / q2);
}

namespace {

// Newton iteration with a central-difference derivative; the starting points
// used below are O(t^2)-accurate so a handful of steps suffices.
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

} // namespace

RootDrift w_root_drift(const ChiPair& chi, double tol, int max_iter) {
    const auto& p = chi.plus.p;
    const auto& uv = chi.plus.polys.uv;
    cd prod = 1.0;
    for (const cd& u : uv) prod *= u;
    if (std::abs(prod - 1.0) > 1e-8)
        throw ValidationError("w_root_drift: requires centred roots (prod u_nu = 1)");

    auto W = [&](cd u) { return wronskian(chi, u); };
    RootDrift out;
    std::vector<cd> nearest;  // zero closest to each input root, in input order
    for (const cd& u0 : uv) {
        cd z = newton_zero(W, u0, tol, max_iter, "w_root_drift");
        nearest.push_back(z);
        out.drifts.push_back(std::abs(z / u0 - 1.0));
        // annulus representative |q|^2 < |z| <= 1 for the reported list
        while (std::abs(z) > 1.0) z *= p.q2;
        while (std::abs(z) <= std::abs(p.q2)) z /= p.q2;
        out.roots.push_back(z);
    }
    for (size_t i = 0; i < out.roots.size(); ++i)
        for (size_t j = i + 1; j < out.roots.size(); ++j)
            if (std::abs(out.roots[i] - out.roots[j])
                < 1e-6 * std::abs(out.roots[i]))
                throw RootCountError("w_root_drift: zeros collapsed, fewer than "
                                     "N distinct zeros in the annulus");
    std::sort(out.roots.begin(), out.roots.end(), [](cd a, cd b) {
        if (std::abs(std::abs(a) - std::abs(b)) > 1e-12)
            return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });

    // The theta-quotient is constant only when prod z_nu = 1, which holds for
    // the nearest representatives (drifted centred roots), not the annulus
    // ones: a rung move u -> q^2 u multiplies theta1(u/z) by a linear factor.
    auto theta_prod = [&](cd u) {
        cd r = 1.0;
        for (const cd& z : nearest) r *= theta1(u / z, p);
        return r;
    };
    const cd probe1(0.77, 0.31), probe2(-1.1, 0.4);
    out.varrho = W(probe1) / theta_prod(probe1);
    const cd check = W(probe2) - out.varrho * theta_prod(probe2);
    out.fit_residual = std::abs(check) / std::max(1e-300, std::abs(W(probe2)));
    return out;
}

cd delta_prime(const BootstrapResult& run, int gamma, int n) {
    if (gamma < 0 || gamma >= static_cast<int>(run.polys.uv.size()))
        throw ValidationError("delta_prime: root index out of range");
    if (n < 1) throw ValidationError("delta_prime: order n must be >= 1");
    const cd q = run.p.q;
    const cd q2 = run.p.q2;
    const cd u = run.polys.uv[gamma];
    cd num = 1.0, den = 1.0;
    for (const cd& a : run.polys.av) {
        cd q2j = 1.0;
        for (int j = 0; j < n; ++j, q2j *= q2) num *= 1.0 + q2j * q * a / u;
    }
    for (const cd& b : run.polys.bv) {
        cd q2j = 1.0;
        for (int j = 0; j < n; ++j, q2j *= q2) num *= 1.0 + q2j * q * b / u;
    }
    for (size_t nu = 0; nu < run.polys.uv.size(); ++nu) {
        cd q2j = 1.0;
        for (int j = 0; j < n; ++j, q2j *= q2) {
            // the (nu = gamma, j = 0) factor is cancelled by the limit
            if (!(static_cast<int>(nu) == gamma && j == 0))
                den *= 1.0 - q2j * run.polys.uv[nu] / u;
        }
    }
    for (const cd& unu : run.polys.uv) {
        cd q2j = q2;
        for (int j = 0; j < n; ++j, q2j *= q2) den *= 1.0 - q2j * unu / u;
    }
    return num / den;
}

ZeroAsymptotics zero_asymptotics(const ChiPair& chi, int gamma, int n) {
    const auto& run = chi.plus;
    if (gamma < 0 || gamma >= static_cast<int>(run.polys.uv.size()))
        throw ValidationError("zero_asymptotics: root index out of range");
    const cd q2 = run.p.q2;
    const cd ug = run.polys.uv[gamma];
    auto f = [&](cd z) { return chi_plus(run, z); };
    ZeroAsymptotics out;
    out.zero = newton_zero(f, ipow(q2, -n) * ug, 1e-14, 80, "zero_asymptotics");
    out.extracted = ug / (ipow(q2, n) * out.zero) - 1.0;
    out.predicted = ipow(run.polys.t2, n) * delta_prime(run, gamma, n);
    return out;
}

} // namespace sg
