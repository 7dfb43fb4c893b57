#pragma once
// Model data: inhomogeneity positions alpha_nu / beta_nu, the scaling
// parameter tau (|t^2| = e^{4 pi eta tau}), and a set of real root positions
// x_nu for the leading transfer polynomial T0(u) = prod_nu (1 - u/u_nu).
// Everything downstream works with the exponentiated quantities
//   a_nu = e^{2 pi b alpha_nu},  b_nu = e^{2 pi b beta_nu},
//   u_nu = e^{2 pi b x_nu},      t^2  = e^{4 pi b tau},
// so the dual (starred) model is obtained by passing star(params): the same
// real data exponentiated with b -> 1/b.

#include <vector>

#include "sg/qseries.hpp"

namespace sg {

struct ModelSpec {
    double theta = 0.0;
    int N = 0;
    std::vector<double> alpha; // size N
    std::vector<double> beta;  // size N
    double tau = 0.0;          // must be < 0 so that |t^2| < 1
    std::vector<double> roots; // size N, root positions of T0

    // Size consistency and |t^2| < 1; ValidationError on violation.  Pass
    // require_roots = false when the roots are the unknowns being solved for.
    void validate(bool require_roots = true) const;
};

// Exponentiated model data and the four basic polynomials.
struct ModelPolys {
    std::vector<cd> av, bv, uv; // a_nu, b_nu, u_nu
    cd t2 = 0.0;                // e^{4 pi b tau}
    CPoly A;      // prod_nu (1 + u / (q a_nu))
    CPoly B;      // prod_nu (1 + q u / b_nu)
    CPoly T0;     // prod_nu (1 - u / u_nu)
    CPoly Aprime; // reciprocal: prod_nu (1 + q a_nu / u)
    CPoly Bprime; // reciprocal: prod_nu (1 + b_nu / (q u))
};

ModelPolys model_polys(const ModelSpec& spec, const ModularParams& p);

// Mirrored model (x -> -x): negated alpha, beta and roots, same tau.
ModelSpec mirror_model(const ModelSpec& spec);

} // namespace sg
