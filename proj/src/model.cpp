#include "sg/model.hpp"

#include <cmath>
#include <sstream>

namespace sg {

void ModelSpec::validate(bool require_roots) const {
    if (N < 1) throw ValidationError("ModelSpec: N must be >= 1");
    auto need = [&](const std::vector<double>& v, const char* name) {
        if (static_cast<int>(v.size()) != N) {
            std::ostringstream msg;
            msg << "ModelSpec: " << name << " must have exactly N = " << N
                << " entries, got " << v.size();
            throw ValidationError(msg.str());
        }
    };
    need(alpha, "alpha");
    need(beta, "beta");
    if (require_roots) need(roots, "roots");
    if (!(tau < 0.0))
        throw ValidationError("ModelSpec: tau must be negative (|t^2| < 1)");
}

ModelPolys model_polys(const ModelSpec& spec, const ModularParams& p) {
    spec.validate();
    ModelPolys mp;
    mp.t2 = std::exp(4.0 * pi * p.b * spec.tau);
    mp.A.c = {cd(1.0)};
    mp.B.c = {cd(1.0)};
    mp.Aprime.c = {cd(1.0)};
    mp.Aprime.reciprocal = true;
    mp.Bprime.c = {cd(1.0)};
    mp.Bprime.reciprocal = true;
    for (int nu = 0; nu < spec.N; ++nu) {
        const cd a = std::exp(2.0 * pi * p.b * spec.alpha[nu]);
        const cd bb = std::exp(2.0 * pi * p.b * spec.beta[nu]);
        const cd u = std::exp(2.0 * pi * p.b * spec.roots[nu]);
        mp.av.push_back(a);
        mp.bv.push_back(bb);
        mp.uv.push_back(u);
        CPoly fa;
        fa.c = {cd(1.0), 1.0 / (p.q * a)};
        mp.A = pmul(mp.A, fa);
        CPoly fb;
        fb.c = {cd(1.0), p.q / bb};
        mp.B = pmul(mp.B, fb);
        CPoly fap;
        fap.c = {cd(1.0), p.q * a};
        fap.reciprocal = true;
        mp.Aprime = pmul(mp.Aprime, fap);
        CPoly fbp;
        fbp.c = {cd(1.0), bb / p.q};
        fbp.reciprocal = true;
        mp.Bprime = pmul(mp.Bprime, fbp);
    }
    mp.T0 = poly_from_roots(mp.uv);
    return mp;
}

ModelSpec mirror_model(const ModelSpec& spec) {
    ModelSpec m = spec;
    for (double& v : m.alpha) v = -v;
    for (double& v : m.beta) v = -v;
    for (double& v : m.roots) v = -v;
    return m;
}

} // namespace sg
