#include "sg/modular.hpp"

#include <cmath>
#include <string>

namespace sg {

ModularParams make_modular_params(double theta) {
    if (!(theta > 0.0) || !(theta < pi / 2.0))
        throw DomainError("make_modular_params: theta must lie strictly inside (0, pi/2), got " +
                          std::to_string(theta));
    ModularParams p;
    p.theta = theta;
    p.eta = std::cos(theta);
    p.sigma = std::sin(theta);
    p.cb = std::cos(2.0 * theta) / 6.0;
    p.b = std::polar(1.0, theta);
    p.binv = std::polar(1.0, -theta);
    p.q = std::exp(iu * pi * p.b * p.b);
    p.qstar = std::exp(-iu * pi * p.binv * p.binv);
    p.q2 = p.q * p.q;
    p.qstar2 = p.qstar * p.qstar;
    p.abs_q = std::abs(p.q);
    if (p.abs_q > 0.999)
        throw PrecisionError("make_modular_params: |q| = " + std::to_string(p.abs_q) +
                             " > 0.999; product truncation accuracy is not guaranteed this close "
                             "to the unit circle (theta too near 0 or pi/2)");
    return p;
}

ModularParams star(const ModularParams& p) {
    ModularParams s = p;
    s.theta = -p.theta;
    s.sigma = -p.sigma;
    std::swap(s.b, s.binv);
    std::swap(s.q, s.qstar);
    std::swap(s.q2, s.qstar2);
    return s;
}

} // namespace sg
