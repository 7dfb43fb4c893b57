// q-Pochhammer / theta1 primitives, polynomial algebra, root extraction and
// the dense solver.  Frozen reference values were produced by an independent
// brute-force product/elimination oracle.
#include <doctest.h>

#include <cmath>
#include <random>

#include "sg/qseries.hpp"

using namespace sg;

TEST_SUITE("qseries") {

TEST_CASE("qpoch basics and tail control") {
    const auto p = make_modular_params(pi / 4);
    CHECK(std::abs(qpoch(cd(0.0), p.q2) - 1.0) == 0.0);      // every factor is 1
    CHECK(std::abs(qpoch(cd(0.3, 0.1), p.q2, 1) - cd(0.7, -0.1)) < 1e-16);
    // frozen brute-force oracle: (q^2; q^2)_inf at theta = pi/4
    const cd qq_inf(0.9981290699259584, -1.6648170986738106e-18);
    CHECK(std::abs(qpoch(p.q2, p.q2) - qq_inf) < 1e-14);
    // doubling the truncation order changes nothing beyond the tail bound
    const cd z(0.8, 0.4);
    const cd full = qpoch(z, p.q2);
    CHECK(std::abs(qpoch(z, p.q2, 40) - full) < 1e-14);
    CHECK_THROWS_AS(qpoch(z, cd(1.01)), ConvergenceError);
}

TEST_CASE("theta1 zeros and quasi-periodicity") {
    const auto p = make_modular_params(pi / 4);
    CHECK(std::abs(theta1(cd(1.0), p)) == 0.0);
    CHECK_THROWS_AS(theta1(cd(0.0), p), DomainError);
    // frozen brute-force oracle: theta1(-1) at theta = pi/4
    CHECK(std::abs(theta1(cd(-1.0), p) - cd(2.0074907733494602)) < 1e-14);
    // theta1(u) + u theta1(q^2 u) = 0 for 100 random u in the annulus
    std::mt19937 rng(20240815u);
    std::uniform_real_distribution<double> mod(p.abs_q * p.abs_q + 1e-3, 1.0 - 1e-3);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const cd u = std::polar(mod(rng), ang(rng));
        worst = std::max(worst, std::abs(theta1(u, p) + u * theta1(p.q2 * u, p)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("jacobi ratio residual vanishes on and off the real axis") {
    for (double th : {pi / 4, pi / 3}) {
        const auto p = make_modular_params(th);
        CHECK(jacobi_ratio_check(cd(0.3), p) < 1e-10);
        // shifted point: both sides transform consistently
        CHECK(jacobi_ratio_check(cd(0.3) + iu * p.b, p) < 1e-9);
    }
}

TEST_CASE("polynomial algebra round trips") {
    const auto p = make_modular_params(pi / 4);
    CPoly one_plus_u;
    one_plus_u.c = {cd(1.0), cd(1.0)};
    const CPoly scaled = q_scale(one_plus_u, p.q2);
    CHECK(std::abs(scaled.c[1] - p.q2) == 0.0);
    const CPoly back = q_scale(scaled, 1.0 / p.q2);
    CHECK(std::abs(back.c[1] - 1.0) < 1e-15);

    // poly_from_roots: {1} -> 1 - u; centered pair -> palindromic coefficients
    const CPoly lin = poly_from_roots({cd(1.0)});
    CHECK(lin.degree() == 1);
    CHECK(std::abs(lin.c[0] - 1.0) == 0.0);
    CHECK(std::abs(lin.c[1] + 1.0) == 0.0);
    const cd u1 = uvar(p, 0.3), u2 = uvar(p, -0.3);
    const CPoly t0 = poly_from_roots({u1, u2});
    // frozen expansion oracle at theta = pi/4
    CHECK(std::abs(t0.c[1] - cd(-0.95587872057466916, -3.4287734697428052)) < 1e-13);
    CHECK(std::abs(t0.c[2] - 1.0) < 1e-13);
    CHECK_THROWS_AS(poly_from_roots({cd(0.0)}), DomainError);

    // q_scale consistency with evaluation
    const cd u0(0.37, -0.81);
    CHECK(std::abs(q_scale(t0, p.q2).eval(u0) - t0.eval(p.q2 * u0)) < 1e-13);

    // reciprocal-variable evaluation
    CPoly rec = t0;
    rec.reciprocal = true;
    CHECK(std::abs(rec.eval(u0) - t0.eval(1.0 / u0)) < 1e-13);
}

TEST_CASE("root extraction recovers input roots (N <= 6)") {
    const auto p = make_modular_params(0.5);
    std::vector<cd> roots;
    for (double x : {-0.62, -0.2, 0.07, 0.31, 0.44}) roots.push_back(uvar(p, x));
    auto got = poly_roots(poly_from_roots(roots));
    REQUIRE(got.size() == roots.size());
    std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });
    for (size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(got[i] - roots[i]) < 1e-9);
}

TEST_CASE("linear_solve: identity, known inverse, oracle comparison") {
    CMatrix I(3);
    for (int i = 0; i < 3; ++i) I.at(i, i) = 1.0;
    const std::vector<cd> rhs{cd(1, 2), cd(-3, 0.5), cd(0, -1)};
    auto sol = linear_solve(I, rhs);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(sol.x[i] - rhs[i]) == 0.0);
    CHECK(sol.residual == 0.0);

    // 2x2 with known inverse: [[1,1],[1,-1]]/  x = ((r0+r1)/2, (r0-r1)/2)
    CMatrix A(2);
    A.at(0, 0) = 1.0; A.at(0, 1) = 1.0;
    A.at(1, 0) = 1.0; A.at(1, 1) = -1.0;
    auto s2 = linear_solve(A, {cd(3, 1), cd(1, -1)});
    CHECK(std::abs(s2.x[0] - cd(2, 0)) < 1e-14);
    CHECK(std::abs(s2.x[1] - cd(1, 1)) < 1e-14);

    // random well-conditioned 20x20 vs an independent full-pivot elimination
    const int n = 20;
    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    CMatrix M(n);
    std::vector<cd> b(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M.at(i, j) = cd(U(rng), U(rng)) + (i == j ? cd(4.0) : cd(0.0));
        b[i] = cd(U(rng), U(rng));
    }
    auto fast = linear_solve(M, b);
    // oracle: Gauss-Jordan without any pivoting refinements, long double free
    std::vector<std::vector<cd>> G(n, std::vector<cd>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) G[i][j] = M.at(i, j);
        G[i][n] = b[i];
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col; r < n; ++r)
            if (std::abs(G[r][col]) > std::abs(G[piv][col])) piv = r;
        std::swap(G[col], G[piv]);
        const cd d = G[col][col];
        for (int j = col; j <= n; ++j) G[col][j] /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const cd f = G[r][col];
            for (int j = col; j <= n; ++j) G[r][j] -= f * G[col][j];
        }
    }
    for (int i = 0; i < n; ++i) CHECK(std::abs(fast.x[i] - G[i][n]) < 1e-10);
    CHECK(fast.residual < 1e-12);

    // singular system raises with a condition estimate in the message
    CMatrix S(2);
    S.at(0, 0) = 1.0; S.at(0, 1) = 2.0;
    S.at(1, 0) = 2.0; S.at(1, 1) = 4.0;
    CHECK_THROWS_AS(linear_solve(S, {cd(1), cd(2)}), SingularSystemError);
}

} // TEST_SUITE
