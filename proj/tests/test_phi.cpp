#include <doctest.h>

#include <cmath>
#include <random>

#include "sg/phi.hpp"

using namespace sg;

namespace {

// Reference values frozen from an independent arbitrary-precision evaluation
// of the defining double product.
struct PhiOracle {
    double theta;
    cd x;
    cd value;
};

const PhiOracle kPhiOracles[] = {
    {0.5, cd(0.35, 0.0), cd(3.4834397575782961e-16, 0.6555494428023424)},
    {pi / 4, cd(1.7, 0.0), cd(2.124389636001712e-17, 9.0792461489389762)},
    {pi / 3, cd(-0.8, 0.0), cd(1.1679339139455637e-19, 0.0037147722141509846)},
    {0.5, cd(0.6, 0.3), cd(-1.1297269515830244, 1.1363599228881895)},
};

} // namespace

TEST_SUITE("phi") {

TEST_CASE("continued log matches the principal branch before the crossing") {
    const cd lam(1.0, 0.7);
    const cd E(0.4, -0.2);
    for (double s : {-6.0, -2.5, -0.3}) {
        const cd w = E * std::exp(lam * s);
        if (std::abs(w) > 1.0) continue;
        CHECK(std::abs(continued_log(E, lam, s) - std::log(1.0 - w)) < 1e-15);
    }
    CHECK(std::abs(continued_log(cd(0.0), lam, 3.0)) == 0.0);
    CHECK_THROWS_AS(continued_log(cd(1.0), cd(-1.0, 0.2), 0.0), DomainError);
}

TEST_CASE("continued log is continuous across the modulus-one crossing") {
    // Sweep s through the crossing on a fine grid; adjacent values must differ
    // by O(step), never by a 2*pi branch jump.
    for (cd E : {cd(0.7, 0.4), cd(-1.3, 0.1), cd(0.0, -2.0)}) {
        for (cd lam : {cd(2.0, 1.3), cd(1.0, -4.0), cd(0.8, 0.0)}) {
            const double s_star = -std::log(std::abs(E)) / lam.real();
            cd prev = continued_log(E, lam, s_star - 0.5);
            for (int k = 1; k <= 200; ++k) {
                const double s = s_star - 0.5 + 0.005 * k;
                const cd cur = continued_log(E, lam, s);
                CHECK(std::abs(cur - prev) < 1.5); // 2*pi jump would show ~6.28
                prev = cur;
            }
        }
    }
}

TEST_CASE("continued log matches sequential unwrapping far past the crossing") {
    // Independent oracle: walk the principal log from deep inside the disk to
    // s = 40 in small steps, snapping each value to the branch nearest its
    // predecessor.  The closed-form continuation must land on the same sheet.
    for (cd E : {cd(0.9, 0.3), cd(-0.6, 1.1)}) {
        for (cd lam : {cd(1.0, 2.0), cd(2.0, -0.9)}) {
            cd acc = std::log(1.0 - E * std::exp(lam * -8.0));
            const double step = 1e-3;
            for (double s = -8.0 + step; s <= 40.0 + 0.5 * step; s += step) {
                cd cur = std::log(1.0 - E * std::exp(lam * s));
                cur += 2.0 * pi * iu
                       * std::round((acc - cur).imag() / (2.0 * pi));
                acc = cur;
            }
            CHECK(std::abs(continued_log(E, lam, 40.0) - acc) < 1e-9);
        }
    }
}

TEST_CASE("on-axis zeros split according to the zero_above flag") {
    // E = 1, lam real: f(s) = 1 - e^{lam s} vanishes at s = 0 on the axis.
    const cd E(1.0);
    const cd lam(2.0, 0.0);
    const cd above = continued_log(E, lam, 1.0, true);
    const cd below = continued_log(E, lam, 1.0, false);
    CHECK(std::abs((above - below) - 2.0 * pi * iu) < 1e-14);
    // modulus part is branch-independent
    CHECK(above.real() == doctest::Approx(std::log(std::expm1(2.0))).epsilon(1e-14));
}

TEST_CASE("log_phi reproduces frozen oracle values") {
    for (const auto& o : kPhiOracles) {
        const auto p = make_modular_params(o.theta);
        const cd got = log_phi(o.x, p);
        CAPTURE(o.theta);
        CAPTURE(o.x.real());
        CHECK(std::abs(got - o.value) < 1e-13);
    }
}

TEST_CASE("phi is unimodular on the real axis") {
    std::mt19937 rng(20240815u);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    for (double theta : {pi / 4, 0.5, pi / 3}) {
        const auto p = make_modular_params(theta);
        for (int k = 0; k < 25; ++k) {
            const double x = xs(rng);
            // factor zeros sit at odd multiples of sigma
            if (std::abs(std::remainder(x - p.sigma, 2.0 * p.sigma)) < 0.02) continue;
            CHECK(std::abs(log_phi(cd(x), p).real()) < 1e-12);
        }
    }
}

TEST_CASE("canonical branch satisfies the inversion relation strictly") {
    std::mt19937 rng(77031u);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    for (double theta : {pi / 4, 0.5, pi / 3}) {
        const auto p = make_modular_params(theta);
        for (int k = 0; k < 20; ++k) {
            const double x = xs(rng);
            if (std::abs(std::remainder(x, p.sigma)) < 0.02) continue;
            const cd lhs = log_phi(cd(x), p) + log_phi(cd(-x), p);
            const cd rhs = iu * pi * x * x + iu * pi * p.cb;
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
    // also off the real axis
    const auto p = make_modular_params(0.5);
    const cd z(0.6, 0.3);
    const cd lhs = log_phi(z, p) + log_phi(-z, p);
    CHECK(std::abs(lhs - (iu * pi * z * z + iu * pi * p.cb)) < 1e-12);
}

TEST_CASE("termwise branch satisfies the shift relation strictly") {
    for (double theta : {pi / 4, 0.5, pi / 3}) {
        const auto p = make_modular_params(theta);
        for (double x : {-1.7, -0.9, -0.33, 0.27, 0.81, 1.52}) {
            const cd lhs = log_phi_termwise(cd(x, -p.eta), p)
                           - log_phi_termwise(cd(x, p.eta), p);
            const cd rhs = std::log(1.0 - uvar(p, cd(x)))
                           + std::log(1.0 - ustar(p, cd(x)));
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("value at the origin") {
    for (double theta : {pi / 4, 0.5, 1.1}) {
        const auto p = make_modular_params(theta);
        CHECK(std::abs(log_phi(cd(0.0), p) - iu * pi * p.cb * 0.5) < 1e-13);
    }
}

TEST_CASE("factor zeros on the evaluation line raise SingularityError") {
    const auto p = make_modular_params(0.5);
    CHECK_THROWS_AS(log_phi(cd(p.sigma), p), SingularityError);
    CHECK_THROWS_AS(log_phi(cd(3.0 * p.sigma), p), SingularityError);
    CHECK_THROWS_AS(log_phi_termwise(cd(p.sigma), p), SingularityError);
}

TEST_CASE("contour route agrees with the product route") {
    std::mt19937 rng(4130u);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    for (double theta : {pi / 4, 0.5, pi / 3}) {
        const auto p = make_modular_params(theta);
        for (int k = 0; k < 6; ++k) {
            const double x = xs(rng);
            if (std::abs(std::remainder(x, p.sigma)) < 0.02) continue;
            CHECK(std::abs(log_phi_quadrature(cd(x), p) - log_phi(cd(x), p)) < 1e-9);
        }
        // a complex point inside the strip
        const cd z(0.45, 0.3 * p.eta);
        CHECK(std::abs(log_phi_quadrature(z, p) - log_phi(z, p)) < 1e-9);
    }
}

TEST_CASE("contour routes reject points outside their decay strips") {
    const auto p = make_modular_params(0.5);
    CHECK_THROWS_AS(log_phi_quadrature(cd(0.1, p.eta - 0.01), p), ConvergenceError);
    CHECK_THROWS_AS(log_phi2(cd(0.1, 2.0 * p.eta - 0.01), p), ConvergenceError);
}

TEST_CASE("companion function: value at the origin and inversion") {
    for (double theta : {pi / 4, 0.5, pi / 3}) {
        const auto p = make_modular_params(theta);
        CHECK(std::abs(log_phi2(cd(0.0), p) - iu * pi * (p.cb + 0.125)) < 1e-10);
        for (double x : {-1.1, 0.4, 0.9}) {
            const cd lhs = log_phi2(cd(x), p) + log_phi2(cd(-x), p);
            const cd rhs = iu * pi * x * x * 0.5 + 2.0 * pi * iu * p.cb
                           + iu * pi * 0.25;
            CHECK(std::abs(lhs - rhs) < 1e-9);
        }
    }
}

TEST_CASE("companion function: shifted copies multiply to phi") {
    for (double theta : {pi / 4, 0.5, pi / 3}) {
        const auto p = make_modular_params(theta);
        for (double x : {-1.3, -0.42, 0.23, 0.95}) {
            if (std::abs(std::remainder(x, p.sigma)) < 0.02) continue;
            const cd lhs = log_phi2(cd(x, p.eta), p) + log_phi2(cd(x, -p.eta), p);
            CHECK(std::abs(lhs - log_phi(cd(x), p)) < 1e-9);
        }
    }
}

TEST_CASE("canonical branch at the shifted line used by density integrals") {
    // frozen oracle on the Im x = eta line (canonical continuation)
    const auto p = make_modular_params(pi / 4);
    const cd got = log_phi(cd(1.2, p.eta), p);
    CHECK(std::abs(got - cd(-5.3286565723924424, 2.9570622473128201)) < 1e-12);
}

} // TEST_SUITE
