#pragma once
// Thermodynamic-limit ground state: external densities P_A/P_B, the kernel
// that solves the density functional equation, the Phi integrals entering
// log chi_+-, the branch-resolved transfer-matrix density integrals, and the
// integral form of the Bethe equations.
//
// The functional equation P(x+i eta) + P(x-i eta) = P_AB(x) is solved by the
// convolution P = K * P_AB with K(x) = 1/(4 eta cosh(pi x / 2 eta)); its
// Fourier transform is 1/(2 cosh(2 pi eta y)), which is how the equation is
// verified (pointwise it holds only distributionally).  Everything here works
// with real densities on the real axis; complex heights appear only inside
// the fundamental strip 0 <= Im z <= 2 eta of the transfer-matrix integrals.

#include <vector>

#include "sg/phi.hpp"

namespace sg {

// ---------------------------------------------------------------------------
// kernel

// K(x) = 1/(4 eta cosh(pi x / 2 eta)); PoleError at x = i eta (2k+1).
cd kernel_K(cd x, const ModularParams& p);

// Antiderivative y(x) of K on the real line with y(-inf) = 0, y(+inf) = 1/2:
// y(x) = log((1+iw)/(1-iw)) / (2 pi i), w = e^{pi x / 2 eta}.  This is both
// the cumulative weight of K and the jump function relating the two branch
// prescriptions of the transfer-matrix density integral.
double kernel_y(double x, const ModularParams& p);

// ---------------------------------------------------------------------------
// density models

struct Atom {
    double weight = 0.0;
    double pos = 0.0;
};

// One external density: either a finite atom list or a unit Gaussian bump.
struct DensityComponent {
    enum class Kind { atoms, gaussian };
    Kind kind = Kind::atoms;
    std::vector<Atom> atoms; // kind == atoms: weights must sum to 1
    double center = 0.0;     // kind == gaussian
    double width = 0.0;      // kind == gaussian: must be > 0

    double eval(double x) const;     // smooth kinds only (DomainError for atoms)
    double mean() const;             // first moment
    double second_moment() const;    // S = int rho x^2
    void validate() const;           // ValidationError on bad mass/width
};

DensityComponent atom_component(std::vector<Atom> atoms);
DensityComponent gaussian_component(double center, double width);

struct DensityModel {
    DensityComponent A, B;

    // Unit masses and the centering mean(B) = -mean(A); ValidationError.
    void validate() const;

    double mu() const { return A.mean(); } // mean(A) = -mean(B)
    double S_A() const { return A.second_moment(); }
    double S_B() const { return B.second_moment(); }
    bool homogeneous() const; // single unit atoms at +mu / -mu
    bool symmetric() const;   // B is the pointwise mirror of A
};

// Homogeneous symmetric model: P_A = delta(x - mu), P_B = delta(x + mu).
DensityModel homogeneous_model(double mu);

// ---------------------------------------------------------------------------
// ground-state density and the functional equation

// P(x) = (K * P_AB)(x): exact kernel sum over atoms, adaptive quadrature for
// smooth components.
double ground_density(double x, const DensityModel& m, const ModularParams& p,
                      double tol = 1e-11);

// Max over the grid of |F[P](y) 2 cosh(2 pi eta y) - F[P_AB](y)| where F[P]
// is quadrature of the convolved density and F[P_AB] is exact (atoms) or
// closed-form (Gaussian).
double verify_primeq(const DensityModel& m, const ModularParams& p,
                     const std::vector<double>& y_grid, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Phi integrals (the thermodynamic logarithms of chi_+-)

// Phi_1(x) computed through both of its representations:
//   density route:  int P(x0)    log phi  (x - x0 + i eta) dx0,
//   pair route:     int P_AB(x0) log phi_2(x - x0 + i eta) dx0,
// returned together with their discrepancy.  Phi_2 is the reflected integral
// (x - x0 -> x0 - x).
struct PhiIntegral {
    cd density_route;
    cd pair_route;
    double discrepancy = 0.0;
};
PhiIntegral phi_integral_1(double x, const DensityModel& m,
                           const ModularParams& p, double tol = 1e-9);
PhiIntegral phi_integral_2(double x, const DensityModel& m,
                           const ModularParams& p, double tol = 1e-9);

// ---------------------------------------------------------------------------
// transfer-matrix density integrals and their branch structure

// Boundary logarithm L_+-(rho) = continued log(1 - e^{2 pi b rho}) along the
// real line, anchored 0 at rho -> -inf; the two signs are the two side
// prescriptions at the zero crossing rho = 0 (plus: path passes below).
cd boundary_log(double rho, const ModularParams& p, bool plus);

// I_+(z): closed-form evaluation of the convolution K * L_+ as the literal
// product  (-q u; q^4)/( -q^3 u; q^4) * (-i w; -i p)/(i w; -i p),
// u = e^{2 pi b z}, w = e^{pi z / 2 eta}, p = e^{-pi sigma / 2 eta}, summed
// factor-by-factor with continued logs along the horizontal line through z.
// Valid in the fundamental strip 0 <= Im z <= 2 eta (DomainError outside);
// I_- = I_+ - 2 pi i y(Re z) on the real line.
cd closed_form_I(cd z, bool plus, const ModularParams& p);

// Direct quadrature route int K(s) L_+-(x - s) ds for real x (cross-check of
// the closed form; the integrand has an integrable log spike at s = x).
cd direct_I(double x, bool plus, const ModularParams& p, double tol = 1e-9);

// Real parts at complex height: the literal modulus sum of the closed-form
// product (the harmonic continuation of Re I_+ from the real line), and the
// direct modulus convolution int K(s) ln|1 - e^{2 pi b (z-s)}| ds.  The two
// agree on the real line and split off it; both are needed for the kernel
// identities below.
double re_closed_form_I(cd z, const ModularParams& p);
double re_direct_I(cd z, const ModularParams& p, double tol = 1e-9);

// int P_AB(x0) I_+-(x - x0) dx0 via the closed form, cross-checked against
// the direct quadrature route; BranchError when the routes disagree (wrong
// side prescription pairing).
cd log_T0_density(double x, const DensityModel& m, const ModularParams& p,
                  bool plus, double tol = 1e-7);

// ---------------------------------------------------------------------------
// pole-avoidance condition and the integral Bethe equations

// delta(x) = int P_AB(x0) ln tanh|pi (x - x0 - sigma) / 4 eta| dx0, which is
// strictly negative (the integrand is log of a quantity in (0,1)); -inf at an
// atom coincidence is legitimate.  shift_residual is the companion identity
// int P_AB(x0) [ Re g(zeta + i eta) - Re I(zeta) - Re I(zeta + 2 i eta) ] dx0,
// zeta = x - x0, g(z) = log(1 - e^{2 pi b z}), which must vanish.
struct DeltaCheck {
    double value = 0.0;
    double shift_residual = 0.0;
};
DeltaCheck delta_negativity(double x, const DensityModel& m,
                            const ModularParams& p, double tol = 1e-9);

// The integral form of the Bethe equations evaluated at the probe points:
//   v(x) = -2 pi i (mu + i eta) x
//          + int P(x0) [lphi(x - x0) - lphi(x0 - x)] dx0
//          - int P_A(x0) log phi(x - x0) dx0 + int P_B(x0) log phi(x0 - x) dx0
// with lphi(rho) = log phi(rho + i eta).  On the convolution solution the
// value is x-independent and equals i pi (S_B - S_A) / 2.
struct BaeIdentityResult {
    std::vector<cd> values;
    double spread = 0.0; // max pairwise distance of values
    cd expected;         // i pi (S_B - S_A) / 2 from the model moments
};
BaeIdentityResult bae_integral_identity(const std::vector<double>& xs,
                                        const DensityModel& m,
                                        const ModularParams& p,
                                        double tol = 1e-8);

} // namespace sg
