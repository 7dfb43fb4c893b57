#pragma once
// Modular parameter bundle for the lattice sinh-Gordon regime |b| = 1.
//
// The deformation parameter is b = e^{i theta} with 0 < theta < pi/2, so that
// the two nomes q = e^{i pi b^2} and qstar = e^{-i pi b^-2} are complex
// conjugates of modulus e^{-pi sin 2 theta} < 1.  Every "starred" quantity is
// the image of the unstarred one under the involution b -> b^-1; for real
// arguments that coincides with complex conjugation.

#include <complex>

#include "sg/errors.hpp"

namespace sg {

using cd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr cd iu{0.0, 1.0};

struct ModularParams {
    double theta = 0.0;   // b = e^{i theta}
    double eta = 0.0;     // cos theta
    double sigma = 0.0;   // sin theta (sign flips under the star involution)
    double cb = 0.0;      // (b^2 + b^-2)/12 = cos(2 theta)/6
    double abs_q = 0.0;   // |q| = e^{-pi sin 2 theta}
    cd b, binv;           // e^{+/- i theta}
    cd q, qstar;          // e^{i pi b^2}, e^{-i pi b^-2} = conj(q)
    cd q2, qstar2;        // squared nomes fed to the q-product machinery
};

// Builds the bundle; DomainError for theta outside (0, pi/2), PrecisionError
// when |q| > 0.999 (the product truncations degrade near the boundary).
ModularParams make_modular_params(double theta);

// The star involution b -> b^-1 applied to the whole bundle (exact swap; an
// involution by construction).  The starred bundle is a valid argument for
// every evaluation routine and realises "evaluate with (qstar, ustar, ...)".
ModularParams star(const ModularParams& p);

// Exponential coordinates u = e^{2 pi b x} and ustar = e^{2 pi b^-1 x}.
inline cd uvar(const ModularParams& p, cd x) { return std::exp(2.0 * pi * p.b * x); }
inline cd ustar(const ModularParams& p, cd x) { return std::exp(2.0 * pi * p.binv * x); }

} // namespace sg
