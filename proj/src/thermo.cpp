#include "sg/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sg/quadrature.hpp"

namespace sg {

namespace {

// The sech-type kernel weight drops below ~1e-16 once pi |x| / (2 eta) > 38;
// integration windows add the density support extent on top of this reach.
double kernel_reach(const ModularParams& p) {
    return (2.0 * p.eta / pi) * 38.0 + 2.0;
}

// Outermost |position| carrying density mass (atom extremum or gaussian
// center plus 8.5 widths, where the residual mass is below 1e-16).
double support_extent(const DensityComponent& c) {
    if (c.kind == DensityComponent::Kind::atoms) {
        double ext = 0.0;
        for (const Atom& a : c.atoms) ext = std::max(ext, std::abs(a.pos));
        return ext;
    }
    return std::abs(c.center) + 8.5 * c.width;
}

double support_extent(const DensityModel& m) {
    return std::max(support_extent(m.A), support_extent(m.B));
}

// Applies op(weight, position) over the atoms, or integrates
// op(rho(x0), x0) over the gaussian bump with forced breakpoints at the
// requested singular events of the downstream integrand.
cd component_integral(const DensityComponent& c,
                      const std::function<cd(double)>& f,
                      const std::vector<double>& events, double tol) {
    if (c.kind == DensityComponent::Kind::atoms) {
        cd tot = 0.0;
        for (const Atom& a : c.atoms) tot += a.weight * f(a.pos);
        return tot;
    }
    const double lo = c.center - 8.5 * c.width;
    const double hi = c.center + 8.5 * c.width;
    return integrate_segments([&](double x0) { return c.eval(x0) * f(x0); },
                              lo, hi, events, tol);
}

cd model_integral(const DensityModel& m, const std::function<cd(double)>& f,
                  const std::vector<double>& events, double tol) {
    return component_integral(m.A, f, events, tol)
           + component_integral(m.B, f, events, tol);
}

// Breakpoints at x + 2 n sigma covering [-X, X]: the lattice of integrable
// log events of log phi(rho + i eta) in both orientations (rho = 0 included).
std::vector<double> sigma_lattice(double x, double X, double sigma,
                                  int stride = 2) {
    std::vector<double> pts;
    const double step = stride * sigma;
    const int nmax = static_cast<int>((2.0 * X) / step) + 1;
    for (int n = -nmax; n <= nmax; ++n) {
        const double s = x + n * step;
        if (-X < s && s < X) pts.push_back(s);
    }
    return pts;
}

// Exact Fourier transform F[rho](y) = int rho(x) e^{2 pi i x y} dx of one
// component (atoms exactly, gaussian in closed form).
cd component_ft(const DensityComponent& c, double y) {
    if (c.kind == DensityComponent::Kind::atoms) {
        cd tot = 0.0;
        for (const Atom& a : c.atoms)
            tot += a.weight * std::exp(2.0 * pi * iu * a.pos * y);
        return tot;
    }
    return std::exp(2.0 * pi * iu * c.center * y
                    - 2.0 * pi * pi * c.width * c.width * y * y);
}

// log(1 - e^{2 pi b z}), principal branch (used only through its real part).
double re_g(cd z, const ModularParams& p) {
    return std::log(std::abs(1.0 - std::exp(2.0 * pi * p.b * z)));
}

constexpr int kMaxFactorFamilies = 100000;

} // namespace

// ---------------------------------------------------------------------------
// kernel

cd kernel_K(cd x, const ModularParams& p) {
    const cd c = std::cosh(pi * x / (2.0 * p.eta));
    if (std::abs(c) < 1e-10) {
        std::ostringstream os;
        os << "kernel_K: pole at x = (" << x.real() << ", " << x.imag()
           << "); poles sit at x = i eta (2k+1)";
        throw PoleError(os.str());
    }
    return 1.0 / (4.0 * p.eta * c);
}

double kernel_y(double x, const ModularParams& p) {
    // log((1+iw)/(1-iw)) / (2 pi i) collapses to arctan(w)/pi for w > 0,
    // which is cancellation-free and saturates cleanly at +-inf.
    return std::atan(std::exp(pi * x / (2.0 * p.eta))) / pi;
}

// ---------------------------------------------------------------------------
// density models

double DensityComponent::eval(double x) const {
    if (kind == Kind::atoms)
        throw DomainError("DensityComponent::eval: atoms are distributions, "
                          "not pointwise densities");
    const double z = (x - center) / width;
    return std::exp(-0.5 * z * z) / (width * std::sqrt(2.0 * pi));
}

double DensityComponent::mean() const {
    if (kind == Kind::gaussian) return center;
    double m = 0.0;
    for (const Atom& a : atoms) m += a.weight * a.pos;
    return m;
}

double DensityComponent::second_moment() const {
    if (kind == Kind::gaussian) return center * center + width * width;
    double s = 0.0;
    for (const Atom& a : atoms) s += a.weight * a.pos * a.pos;
    return s;
}

void DensityComponent::validate() const {
    if (kind == Kind::atoms) {
        if (atoms.empty())
            throw ValidationError("DensityComponent: empty atom list");
        double mass = 0.0;
        for (const Atom& a : atoms) {
            if (a.weight <= 0.0)
                throw ValidationError("DensityComponent: atom weights must be "
                                      "positive");
            mass += a.weight;
        }
        if (std::abs(mass - 1.0) > 1e-10) {
            std::ostringstream os;
            os << "DensityComponent: atom weights sum to " << mass
               << ", expected 1";
            throw ValidationError(os.str());
        }
        return;
    }
    if (!(width > 0.0))
        throw ValidationError("DensityComponent: gaussian width must be > 0");
}

DensityComponent atom_component(std::vector<Atom> atoms) {
    DensityComponent c;
    c.kind = DensityComponent::Kind::atoms;
    c.atoms = std::move(atoms);
    return c;
}

DensityComponent gaussian_component(double center, double width) {
    DensityComponent c;
    c.kind = DensityComponent::Kind::gaussian;
    c.center = center;
    c.width = width;
    return c;
}

void DensityModel::validate() const {
    A.validate();
    B.validate();
    if (std::abs(A.mean() + B.mean()) > 1e-10) {
        std::ostringstream os;
        os << "DensityModel: means must be centred, mean(A) = " << A.mean()
           << ", mean(B) = " << B.mean();
        throw ValidationError(os.str());
    }
}

bool DensityModel::homogeneous() const {
    return A.kind == DensityComponent::Kind::atoms && A.atoms.size() == 1
           && B.kind == DensityComponent::Kind::atoms && B.atoms.size() == 1
           && std::abs(A.atoms[0].pos + B.atoms[0].pos) < 1e-12;
}

bool DensityModel::symmetric() const {
    if (A.kind != B.kind) return false;
    if (A.kind == DensityComponent::Kind::gaussian)
        return std::abs(A.center + B.center) < 1e-12
               && std::abs(A.width - B.width) < 1e-12;
    if (A.atoms.size() != B.atoms.size()) return false;
    auto key = [](const Atom& a) { return std::pair(a.pos, a.weight); };
    std::vector<Atom> mb = B.atoms;
    for (Atom& a : mb) a.pos = -a.pos;
    std::vector<Atom> ma = A.atoms;
    auto lt = [&](const Atom& l, const Atom& r) { return key(l) < key(r); };
    std::sort(ma.begin(), ma.end(), lt);
    std::sort(mb.begin(), mb.end(), lt);
    for (size_t i = 0; i < ma.size(); ++i)
        if (std::abs(ma[i].pos - mb[i].pos) > 1e-12
            || std::abs(ma[i].weight - mb[i].weight) > 1e-12)
            return false;
    return true;
}

DensityModel homogeneous_model(double mu) {
    DensityModel m;
    m.A = atom_component({{1.0, mu}});
    m.B = atom_component({{1.0, -mu}});
    return m;
}

// ---------------------------------------------------------------------------
// ground-state density and the functional equation

double ground_density(double x, const DensityModel& m, const ModularParams& p,
                      double tol) {
    m.validate();
    const cd v = model_integral(
        m, [&](double x0) { return kernel_K(cd(x - x0), p); }, {}, tol);
    return v.real();
}

double verify_primeq(const DensityModel& m, const ModularParams& p,
                     const std::vector<double>& y_grid, double tol) {
    m.validate();
    const double X = kernel_reach(p) + support_extent(m);
    double worst = 0.0;
    for (double y : y_grid) {
        const cd fp = integrate_gk(
            [&](double x) {
                return ground_density(x, m, p, tol * 1e-2)
                       * std::exp(2.0 * pi * iu * x * y);
            },
            -X, X, tol);
        const cd lhs = fp * 2.0 * std::cosh(2.0 * pi * p.eta * y);
        const cd rhs = component_ft(m.A, y) + component_ft(m.B, y);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Phi integrals

namespace {

PhiIntegral phi_integral(double x, const DensityModel& m,
                         const ModularParams& p, double tol, bool reflected) {
    m.validate();
    const double X = kernel_reach(p) + support_extent(m) + std::abs(x);
    // rho(x0) = x - x0 (or x0 - x): log events of log phi(rho + i eta) sit on
    // the lattice rho = 2 n sigma either way, i.e. x0 = x + 2 n sigma.
    auto arg = [&](double x0) { return reflected ? x0 - x : x - x0; };

    PhiIntegral out;
    const cd r1 = integrate_segments(
        [&](double x0) {
            return ground_density(x0, m, p, tol * 1e-2)
                   * log_phi(cd(arg(x0), p.eta), p);
        },
        -X, X, sigma_lattice(x, X, p.sigma), tol);
    // pair route: the double-nome dilogarithm against the bare P_AB; its
    // events on the line Im = eta sit on the full sigma lattice.
    const cd r2 = model_integral(
        m, [&](double x0) { return log_phi2(cd(arg(x0), p.eta), p); },
        sigma_lattice(x, X, p.sigma, 1), tol);
    out.density_route = r1;
    out.pair_route = r2;
    out.discrepancy = std::abs(r1 - r2);
    return out;
}

} // namespace

PhiIntegral phi_integral_1(double x, const DensityModel& m,
                           const ModularParams& p, double tol) {
    return phi_integral(x, m, p, tol, false);
}

PhiIntegral phi_integral_2(double x, const DensityModel& m,
                           const ModularParams& p, double tol) {
    return phi_integral(x, m, p, tol, true);
}

// ---------------------------------------------------------------------------
// transfer-matrix density integrals

cd boundary_log(double rho, const ModularParams& p, bool plus) {
    return continued_log(1.0, 2.0 * pi * p.b, rho, plus);
}

cd closed_form_I(cd z, bool plus, const ModularParams& p) {
    if (z.imag() < -1e-12 || z.imag() > 2.0 * p.eta + 1e-12)
        throw DomainError("closed_form_I: argument outside the fundamental "
                          "strip 0 <= Im z <= 2 eta");
    if (!plus && std::abs(z.imag()) > 1e-12)
        throw DomainError("closed_form_I: the minus prescription is defined "
                          "on the real line only");
    const double s = z.real(), c = z.imag();
    const cd q = p.q;
    const cd mip = std::exp(-iu * pi / (2.0 * p.eta * p.b)); // -i p
    const cd lam_u = 2.0 * pi * p.b;
    const cd lam_w = pi / (2.0 * p.eta);
    const cd eu = std::exp(iu * lam_u * c);
    const cd ew = std::exp(iu * lam_w * c);

    cd tot = 0.0;
    cd q4m1 = q;            // q^{4m+1}
    cd mipm = 1.0;          // (-i p)^m
    const cd q4 = q * q * q * q;
    for (int m = 0; m < kMaxFactorFamilies; ++m) {
        const cd E[4] = {-q4m1 * eu, -q4m1 * q * q * eu, -iu * mipm * ew,
                         iu * mipm * ew};
        const double sign[4] = {+1.0, -1.0, +1.0, -1.0};
        const cd lam[4] = {lam_u, lam_u, lam_w, lam_w};
        bool live = false;
        for (int k = 0; k < 4; ++k) {
            const cd w = E[k] * std::exp(lam[k] * s);
            if (std::abs(E[k]) < 1e-18 && std::abs(w) < 1e-18) continue;
            if (std::abs(1.0 - w) < 1e-12) {
                std::ostringstream os;
                os << "closed_form_I: factor zero at z = (" << z.real() << ", "
                   << z.imag() << "), family " << k << ", index " << m;
                throw SingularityError(os.str());
            }
            tot += sign[k] * continued_log(E[k], lam[k], s, true);
            live = true;
        }
        if (!live) break;
        q4m1 *= q4;
        mipm *= mip;
        if (m + 1 == kMaxFactorFamilies)
            throw ConvergenceError("closed_form_I: factor families did not "
                                   "terminate");
    }
    if (!plus) tot -= 2.0 * pi * iu * kernel_y(s, p);
    return tot;
}

double re_closed_form_I(cd z, const ModularParams& p) {
    if (z.imag() < -1e-12 || z.imag() > 2.0 * p.eta + 1e-12)
        throw DomainError("re_closed_form_I: argument outside the fundamental "
                          "strip 0 <= Im z <= 2 eta");
    const cd q = p.q;
    const cd mip = std::exp(-iu * pi / (2.0 * p.eta * p.b));
    const cd u = std::exp(2.0 * pi * p.b * z);
    const cd w = std::exp(pi * z / (2.0 * p.eta));
    double tot = 0.0;
    cd q4m1 = q;
    cd mipm = 1.0;
    const cd q4 = q * q * q * q;
    for (int m = 0; m < kMaxFactorFamilies; ++m) {
        tot += std::log(std::abs(1.0 + q4m1 * u))
               - std::log(std::abs(1.0 + q4m1 * q * q * u))
               + std::log(std::abs(1.0 + iu * w * mipm))
               - std::log(std::abs(1.0 - iu * w * mipm));
        if (std::max(std::abs(q4m1 * q * q * u), std::abs(w * mipm)) < 1e-18)
            return tot;
        q4m1 *= q4;
        mipm *= mip;
    }
    throw ConvergenceError("re_closed_form_I: factor families did not "
                           "terminate");
}

cd direct_I(double x, bool plus, const ModularParams& p, double tol) {
    const double X = kernel_reach(p) + std::abs(x);
    return integrate_segments(
        [&](double s) {
            return kernel_K(cd(s), p) * boundary_log(x - s, p, plus);
        },
        -X, X, {x}, tol);
}

double re_direct_I(cd z, const ModularParams& p, double tol) {
    const double X = kernel_reach(p) + std::abs(z.real());
    // the log modulus is singular in s only when Im z is an integer multiple
    // k of eta: the zero line of 1 - e^{2 pi b (z - s)} crosses at
    // s = Re z - k sigma.
    std::vector<double> events;
    const double k = z.imag() / p.eta;
    if (std::abs(k - std::round(k)) < 1e-9)
        events.push_back(z.real() - std::round(k) * p.sigma);
    const cd v = integrate_segments(
        [&](double s) { return kernel_K(cd(s), p) * re_g(z - s, p); }, -X, X,
        events, tol);
    return v.real();
}

cd log_T0_density(double x, const DensityModel& m, const ModularParams& p,
                  bool plus, double tol) {
    m.validate();
    auto closed = [&](double x0) { return closed_form_I(cd(x - x0), plus, p); };
    auto direct = [&](double x0) { return direct_I(x - x0, plus, p, tol * 0.1); };
    // the boundary-log crossing rho = 0 is the only real-line event
    const std::vector<double> events = {x};
    const cd vc = model_integral(m, closed, events, tol);
    const cd vd = model_integral(m, direct, events, tol);
    if (std::abs(vc - vd) > tol * std::max(1.0, std::abs(vc))) {
        std::ostringstream os;
        os << "log_T0_density: closed-form and direct routes disagree by "
           << std::abs(vc - vd) << " at x = " << x
           << " (side prescription pairing)";
        throw BranchError(os.str());
    }
    return vc;
}

// ---------------------------------------------------------------------------
// pole-avoidance condition and the integral Bethe equations

DeltaCheck delta_negativity(double x, const DensityModel& m,
                            const ModularParams& p, double tol) {
    m.validate();
    DeltaCheck out;
    // ln tanh|pi (x - x0 - sigma) / 4 eta|: integrable log spike at
    // x0 = x - sigma; exact -inf at an atom coincidence is legitimate.
    const cd v = model_integral(
        m,
        [&](double x0) {
            return cd(std::log(std::tanh(
                std::abs(pi * (x - x0 - p.sigma) / (4.0 * p.eta)))));
        },
        {x - p.sigma}, tol);
    out.value = v.real();
    // companion identity: zeta = x - x0,
    // Re g(zeta + i eta) - Re I(zeta) - Re I(zeta + 2 i eta) = 0 per kernel,
    // evaluated with the literal closed-form continuation at both heights.
    const double X = kernel_reach(p) + support_extent(m) + std::abs(x);
    const cd r = model_integral(
        m,
        [&](double x0) {
            const cd zeta(x - x0);
            return cd(re_g(zeta + iu * p.eta, p) - re_closed_form_I(zeta, p)
                      - re_closed_form_I(zeta + 2.0 * iu * p.eta, p));
        },
        sigma_lattice(x, X, p.sigma, 1), tol);
    out.shift_residual = r.real();
    return out;
}

BaeIdentityResult bae_integral_identity(const std::vector<double>& xs,
                                        const DensityModel& m,
                                        const ModularParams& p, double tol) {
    m.validate();
    BaeIdentityResult out;
    out.expected = iu * pi * 0.5 * (m.S_B() - m.S_A());
    const double mu = m.mu();
    for (double x : xs) {
        const double X = kernel_reach(p) + support_extent(m) + std::abs(x);
        const cd t1 = integrate_segments(
            [&](double x0) {
                return ground_density(x0, m, p, tol * 1e-2)
                       * (log_phi(cd(x - x0, p.eta), p)
                          - log_phi(cd(x0 - x, p.eta), p));
            },
            -X, X, sigma_lattice(x, X, p.sigma), tol);
        // the bare-density terms carry log phi at real argument, singular on
        // the odd sigma lattice x - x0 = (2k+1) sigma
        const cd ta = component_integral(
            m.A, [&](double x0) { return log_phi(cd(x - x0), p); },
            sigma_lattice(x - p.sigma, X, p.sigma, 2), tol);
        const cd tb = component_integral(
            m.B, [&](double x0) { return log_phi(cd(x0 - x), p); },
            sigma_lattice(x + p.sigma, X, p.sigma, 2), tol);
        out.values.push_back(-2.0 * pi * iu * (mu + iu * p.eta) * x + t1 - ta
                             + tb);
    }
    out.spread = 0.0;
    for (size_t i = 0; i < out.values.size(); ++i)
        for (size_t j = i + 1; j < out.values.size(); ++j)
            out.spread = std::max(out.spread,
                                  std::abs(out.values[i] - out.values[j]));
    return out;
}

} // namespace sg
