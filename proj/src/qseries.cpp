#include "sg/qseries.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sg {

cd qpoch(cd z, cd nome, long n, double tol) {
    const double aq = std::abs(nome);
    if (n < 0 && aq >= 1.0)
        throw ConvergenceError("qpoch: infinite product requires |nome| < 1");
    cd res = 1.0;
    cd zk = z;
    long k = 0;
    const long cap = 400000;
    while (true) {
        if (n >= 0 && k >= n) break;
        res *= (1.0 - zk);
        zk *= nome;
        ++k;
        if (n < 0 && std::abs(zk) / (1.0 - aq) < tol) break;
        if (k > cap)
            throw ConvergenceError("qpoch: tail bound not reached within term cap (|nome| = " +
                                   std::to_string(aq) + ")");
    }
    return res;
}

cd theta1(cd u, const ModularParams& p) {
    if (u == cd(0.0)) throw DomainError("theta1: u = 0 is outside the domain");
    return qpoch(u, p.q2) * qpoch(p.q2 / u, p.q2);
}

double jacobi_ratio_check(cd x, const ModularParams& p) {
    const cd th = theta1(uvar(p, x), p);
    const cd ths = theta1(ustar(p, x), star(p));
    if (std::abs(ths) < 1e-300 || std::abs(th) < 1e-300)
        throw DomainError("jacobi_ratio_check: x sits on a theta1 zero");
    const cd rhs = std::exp(iu * pi * (x + p.sigma) * (x + p.sigma) + iu * pi * p.cb);
    return std::abs(th / ths - rhs);
}

// ---------------------------------------------------------------------------

cd CPoly::eval(cd u) const {
    const cd arg = reciprocal ? 1.0 / u : u;
    cd r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * arg + *it;
    return r;
}

CPoly& CPoly::trim(double tol) {
    while (c.size() > 1 && std::abs(c.back()) <= tol) c.pop_back();
    return *this;
}

namespace {
void require_same_variable(const CPoly& a, const CPoly& b, const char* op) {
    if (a.reciprocal != b.reciprocal)
        throw DomainError(std::string(op) + ": mixing u- and 1/u-polynomials is not defined");
}
} // namespace

CPoly padd(const CPoly& a, const CPoly& b) {
    require_same_variable(a, b, "padd");
    CPoly r = a;
    if (b.c.size() > r.c.size()) r.c.resize(b.c.size(), cd(0.0));
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

CPoly psub(const CPoly& a, const CPoly& b) { return padd(a, pscale(b, cd(-1.0))); }

CPoly pmul(const CPoly& a, const CPoly& b) {
    require_same_variable(a, b, "pmul");
    CPoly r;
    r.reciprocal = a.reciprocal;
    r.c.assign(a.c.size() + b.c.size() - 1, cd(0.0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

CPoly pscale(const CPoly& a, cd s) {
    CPoly r = a;
    for (auto& v : r.c) v *= s;
    return r;
}

CPoly pshift_deg(const CPoly& a, int j) {
    CPoly r;
    r.reciprocal = a.reciprocal;
    r.c.assign(a.c.size() + static_cast<size_t>(j), cd(0.0));
    std::copy(a.c.begin(), a.c.end(), r.c.begin() + j);
    return r;
}

CPoly q_scale(const CPoly& p, cd lambda) {
    CPoly r = p;
    cd pw = 1.0;
    for (auto& v : r.c) {
        v *= pw;
        pw *= lambda;
    }
    return r;
}

CPoly poly_from_roots(const std::vector<cd>& roots) {
    CPoly p;
    p.c = {cd(1.0)};
    for (cd r : roots) {
        if (r == cd(0.0)) throw DomainError("poly_from_roots: zero root has no (1 - u/r) factor");
        CPoly f;
        f.c = {cd(1.0), -1.0 / r};
        p = pmul(p, f);
    }
    return p;
}

std::vector<cd> poly_roots(const CPoly& p) {
    CPoly w = p;
    w.trim(0.0);
    const int d = w.degree();
    if (d < 1) return {};
    // companion matrix of the monic normalization
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    const cd lead = w.c[d];
    for (int i = 0; i < d; ++i) C(i, d - 1) = -w.c[i] / lead;
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("poly_roots: eigenvalue iteration failed");
    std::vector<cd> roots(d);
    for (int i = 0; i < d; ++i) {
        cd z = es.eigenvalues()(i);
        // one Newton polish step: z -= p(z)/p'(z)
        cd f = 0.0, fp = 0.0;
        for (int k = d; k >= 0; --k) {
            fp = fp * z + f;
            f = f * z + w.c[k];
        }
        if (std::abs(fp) > 0.0) z -= f / fp;
        roots[i] = z;
    }
    std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return std::arg(a) < std::arg(b);
    });
    return roots;
}

// ---------------------------------------------------------------------------

LinearSolution linear_solve(const CMatrix& M, const std::vector<cd>& rhs,
                            double singular_tol) {
    const int n = M.n;
    if (static_cast<int>(rhs.size()) != n)
        throw ValidationError("linear_solve: rhs length does not match matrix size");
    CMatrix A = M;
    std::vector<cd> b = rhs;
    // Row equilibration: the bootstrap systems mix q^{+2j} and q^{-2j} scales
    // across rows, which would otherwise trip the pivot threshold on
    // perfectly solvable (if badly scaled) systems.
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s = std::max(s, std::abs(A.at(i, j)));
        if (s == 0.0)
            throw SingularSystemError("linear_solve: zero row in matrix");
        for (int j = 0; j < n; ++j) A.at(i, j) /= s;
        b[i] /= s;
    }
    std::vector<int> perm(n);
    double pivot_max = 0.0, pivot_min = 0.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(A.at(r, col));
            if (v > best) { best = v; piv = r; }
        }
        pivot_max = std::max(pivot_max, best);
        pivot_min = (col == 0) ? best : std::min(pivot_min, best);
        if (best < 1e-300 || best < singular_tol) {
            std::ostringstream os;
            os << "linear_solve: pivot " << best << " at column " << col
               << " below threshold; condition estimate "
               << (best > 0.0 ? pivot_max / best : std::numeric_limits<double>::infinity());
            throw SingularSystemError(os.str());
        }
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A.at(col, j), A.at(piv, j));
            std::swap(b[col], b[piv]);
        }
        perm[col] = piv;
        for (int r = col + 1; r < n; ++r) {
            const cd f = A.at(r, col) / A.at(col, col);
            A.at(r, col) = 0.0;
            for (int j = col + 1; j < n; ++j) A.at(r, j) -= f * A.at(col, j);
            b[r] -= f * b[col];
        }
    }
    LinearSolution sol;
    sol.x.assign(n, cd(0.0));
    for (int i = n - 1; i >= 0; --i) {
        cd s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A.at(i, j) * sol.x[j];
        sol.x[i] = s / A.at(i, i);
    }
    sol.condition_estimate = pivot_min > 0.0 ? pivot_max / pivot_min
                                             : std::numeric_limits<double>::infinity();
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        cd s = -rhs[i];
        for (int j = 0; j < n; ++j) s += M.at(i, j) * sol.x[j];
        res = std::max(res, std::abs(s));
    }
    sol.residual = res;
    return sol;
}

} // namespace sg
