#include "sg/phi.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sg/quadrature.hpp"

namespace sg {

namespace {

// Linear part of log(-E*exp(Lambda*s)): modulus growth plus the unwound
// argument Arg E + pi + Im(Lambda)*s.  This carries the winding that the
// principal log discards once |E*exp(Lambda*s)| > 1.
cd unwound_linear(cd E, cd Lambda, double s) {
    return cd(std::log(std::abs(E)) + Lambda.real() * s,
              std::arg(E) + pi + Lambda.imag() * s);
}

} // namespace

cd continued_log(cd E, cd Lambda, double s, bool zero_above, double zero_tol) {
    if (Lambda.real() <= 0.0)
        throw DomainError("continued_log: requires Re Lambda > 0");
    if (E == cd(0.0)) return cd(0.0);

    const cd w = E * std::exp(Lambda * s);
    // Inside the modulus-one disk 1 - w stays in the right half plane along
    // the whole path from s = -inf, so the principal log is already continued.
    if (std::abs(w) <= 1.0) return std::log(1.0 - w);

    // Beyond the crossing write 1 - w = -w (1 - 1/w); the second factor keeps
    // Re > 0, so all winding sits in log(-w) = unwound_linear + 2*pi*i*kappa.
    const double s_star = -std::log(std::abs(E)) / Lambda.real();
    const cd w_star = E * std::exp(Lambda * s_star);
    double kappa;
    if (std::abs(1.0 - w_star) > 0.3) {
        // Crossing is far from the zero of 1 - w: match branches right at it.
        kappa = std::round((std::log(1.0 - w_star) - unwound_linear(E, Lambda, s_star)
                            - std::log(1.0 - 1.0 / w_star)).imag() / (2.0 * pi));
    } else {
        // A zero of 1 - E*exp(Lambda*s) sits near the crossing.  Locate the
        // one nearest the real s-axis and continue past it, stepping the
        // argument by +/- pi according to which side of the line it lies on
        // (zero_above resolves the on-axis case).
        const cd mlogE = -std::log(E);
        const double k0 = std::round((Lambda * s_star - mlogE).imag() / (2.0 * pi));
        cd s0;
        double best = std::numeric_limits<double>::infinity();
        for (int dk = -1; dk <= 1; ++dk) {
            const cd cand = (mlogE + 2.0 * pi * iu * (k0 + dk)) / Lambda;
            if (std::abs(cand.imag()) < best) {
                best = std::abs(cand.imag());
                s0 = cand;
            }
        }
        double delta;
        if (s0.imag() > zero_tol) delta = pi;
        else if (s0.imag() < -zero_tol) delta = -pi;
        else delta = zero_above ? pi : -pi;

        const double eps = 0.5 / std::abs(Lambda);
        const double target =
            std::log(1.0 - E * std::exp(Lambda * (s_star - eps))).imag() + delta;
        const double approx =
            (unwound_linear(E, Lambda, s_star + eps)
             + std::log(1.0 - std::exp(-Lambda * (s_star + eps)) / E)).imag();
        kappa = std::round((target - approx) / (2.0 * pi));
    }
    return unwound_linear(E, Lambda, s) + std::log(1.0 - 1.0 / w)
           + 2.0 * pi * iu * kappa;
}

namespace {

constexpr long kMaxFamilyTerms = 200000;
constexpr double kFamilyCut = 1e-18;   // stop once |E| and |w| both below
constexpr double kFactorZeroTol = 1e-12;

// Sum one geometric factor family log prod_{n>=0} (1 + Q^{2n+1} e^{Lambda x}),
// evaluated at x = s + i c, with per-factor branch handling supplied by the
// caller (canonical continued log or principal log).
template <typename FactorLog>
cd family_sum(cd Q, cd Lambda, cd x, FactorLog factor_log) {
    const double s = x.real();
    const double c = x.imag();
    const cd phase = std::exp(iu * Lambda * c);
    const cd growth = std::exp(Lambda * s);
    cd E = -Q * phase;
    cd sum = 0.0;
    for (long n = 0; n < kMaxFamilyTerms; ++n) {
        const cd w = E * growth;
        if (std::abs(E) < kFamilyCut && std::abs(w) < kFamilyCut) return sum;
        if (std::abs(1.0 - w) < kFactorZeroTol) {
            std::ostringstream msg;
            msg << "log_phi: product factor vanishes at x = (" << x.real()
                << ", " << x.imag() << "), family term n = " << n;
            throw SingularityError(msg.str());
        }
        sum += factor_log(E, w, n);
        E *= Q * Q;
    }
    throw ConvergenceError("log_phi: factor family failed to decay within term budget");
}

} // namespace

cd log_phi(cd x, const ModularParams& p) {
    const cd lam_b = 2.0 * pi * p.b;
    const cd lam_bi = 2.0 * pi * p.binv;
    auto canonical = [&](cd Lambda) {
        return [Lambda, s = x.real()](cd E, cd /*w*/, long /*n*/) {
            return continued_log(E, Lambda, s);
        };
    };
    return family_sum(p.q, lam_b, x, canonical(lam_b))
           - family_sum(p.qstar, lam_bi, x, canonical(lam_bi));
}

cd log_phi_termwise(cd x, const ModularParams& p) {
    auto principal = [](cd /*E*/, cd w, long /*n*/) { return std::log(1.0 - w); };
    return family_sum(p.q, 2.0 * pi * p.b, x, principal)
           - family_sum(p.qstar, 2.0 * pi * p.binv, x, principal);
}

namespace {

// Shared indented-contour evaluation: integral of kernel(y) over
// (-Y, -r] + upper semicircle of radius r + [r, Y), with the radius kept at
// half the distance to the nearest kernel pole and Y sized so the neglected
// tails are ~exp(-42).
cd indented_contour(const std::function<cd(cd)>& kernel, double r, double decay,
                    double tol) {
    const double Y = 42.0 / decay;
    auto on_axis = [&](double y) { return kernel(cd(y, 0.0)); };
    const cd left = integrate_gk(on_axis, -Y, -r, tol);
    const cd right = integrate_gk(on_axis, r, Y, tol);
    // Semicircle y = r e^{ia}, a from pi down to 0; dy = i r e^{ia} da.
    auto arc = [&](double a) {
        const cd y = r * std::exp(iu * a);
        return kernel(y) * iu * y;
    };
    const cd semicircle = -integrate_gk(arc, 0.0, pi, tol);
    return left + semicircle + right;
}

} // namespace

cd log_phi_quadrature(cd x, const ModularParams& p, double tol) {
    const double decay = 2.0 * p.eta - 2.0 * std::abs(x.imag());
    if (decay <= 0.05)
        throw ConvergenceError("log_phi_quadrature: |Im x| too close to eta, "
                               "kernel decay rate below threshold");
    const double r = std::min(pi / (8.0 * p.eta), pi / 2.0);
    auto kernel = [&](cd y) {
        return std::exp(-2.0 * iu * x * y)
               / (4.0 * std::sinh(p.b * y) * std::sinh(p.binv * y) * y);
    };
    return indented_contour(kernel, r, decay, tol);
}

cd log_phi2(cd x, const ModularParams& p, double tol) {
    const double decay = 4.0 * p.eta - 2.0 * std::abs(x.imag());
    if (decay <= 0.05)
        throw ConvergenceError("log_phi2: |Im x| too close to 2*eta, "
                               "kernel decay rate below threshold");
    const double r = std::min(pi / (8.0 * p.eta), pi / 2.0);
    auto kernel = [&](cd y) {
        return std::exp(-2.0 * iu * x * y)
               / (8.0 * std::cosh(2.0 * p.eta * y) * std::sinh(p.b * y)
                  * std::sinh(p.binv * y) * y);
    };
    return indented_contour(kernel, r, decay, tol);
}

} // namespace sg
