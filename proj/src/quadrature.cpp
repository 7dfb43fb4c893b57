#include "sg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace sg {

namespace {

// QUADPACK qk15 nodes/weights (positive half; node 0 last).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    cd kronrod;
    double err;
};

PanelResult gk15(const std::function<cd(double)>& f, double a, double b) {
    const double hl = 0.5 * (b - a);
    const double ce = 0.5 * (a + b);
    cd resg = 0.0, resk = 0.0;
    const cd fc = f(ce);
    resk += wgk[7] * fc;
    resg += wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const cd f1 = f(ce - hl * xgk[j]);
        const cd f2 = f(ce + hl * xgk[j]);
        resk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    PanelResult out{resk * hl, std::abs((resk - resg) * hl)};
    // A node landing on a singularity yields inf/nan; report the panel as
    // value 0 with maximal error so it is split first and the running totals
    // stay finite (children re-evaluate at shifted nodes).
    if (!std::isfinite(out.err) || !std::isfinite(std::abs(out.kronrod))) {
        out.kronrod = cd(0.0);
        out.err = std::numeric_limits<double>::max();
    }
    return out;
}

} // namespace

cd integrate_gk(const std::function<cd(double)>& f, double a, double b,
                double tol, int max_panels) {
    if (a == b) return cd(0.0);
    struct Panel {
        double a, b, err;
        cd val;
    };
    std::vector<Panel> panels;
    auto first = gk15(f, a, b);
    panels.push_back({a, b, first.err, first.kronrod});
    for (;;) {
        // Totals are re-accumulated each sweep: running sums would be wrecked
        // by the sentinel error of a panel that hit a singularity.
        cd total = 0.0;
        double toterr = 0.0;
        size_t worst = 0;
        for (size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].val;
            toterr += panels[i].err;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (toterr <= tol * std::max(1.0, std::abs(total))) return total;
        if (panels.size() >= static_cast<size_t>(max_panels))
            throw ConvergenceError("integrate_gk: error estimate stalled at panel budget");
        const Panel w = panels[worst];
        const double mid = 0.5 * (w.a + w.b);
        auto left = gk15(f, w.a, mid);
        auto right = gk15(f, mid, w.b);
        panels[worst] = {w.a, mid, left.err, left.kronrod};
        panels.push_back({mid, w.b, right.err, right.kronrod});
    }
}

cd integrate_segments(const std::function<cd(double)>& f, double a, double b,
                      std::vector<double> breakpoints, double tol, int max_panels) {
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    cd total = 0.0;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = std::max(a, breakpoints[i]);
        const double hi = std::min(b, breakpoints[i + 1]);
        if (hi - lo <= 0.0) continue;
        total += integrate_gk(f, lo, hi, tol, max_panels);
    }
    return total;
}

cd tanh_sinh(const std::function<cd(double)>& f, double a, double b,
             double tol, int max_level) {
    const double hl = 0.5 * (b - a);
    const double tmax = 6.6; // node weight underflows past this in double
    // Trapezoid node/weight in the double-exponential variable t.  The node
    // abscissa is built from its distance to the nearer endpoint,
    // delta = hl * 2 / (1 + e^{2 sh}), not from ce + hl*tanh(sh): the latter
    // cancels catastrophically near the endpoints and ruins integrands with
    // algebraic singularities there.  Nodes that still round onto an endpoint
    // carry negligible weight and are skipped.
    auto add_pair = [&](double t, cd& acc) {
        const double sh = 0.5 * pi * std::sinh(t);
        const double delta = 2.0 * hl / (1.0 + std::exp(2.0 * sh));
        if (delta == 0.0) return;
        const double ch = std::cosh(sh);
        const double w = hl * 0.5 * pi * std::cosh(t) / (ch * ch);
        if (w == 0.0) return;
        const double xl = a + delta; // node pushed toward a (t -> +inf side)
        const double xr = b - delta;
        if (xl > a) acc += w * f(xl);
        if (t > 0.0 && xr < b) acc += w * f(xr);
    };
    double h = 1.0;
    cd sum = 0.0;
    add_pair(0.0, sum);
    for (double t = 1.0; t <= tmax; t += 1.0) add_pair(t, sum);
    cd prev = sum * h;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        // refinement touches only the odd multiples of the new step
        for (double t = h; t <= tmax; t += 2.0 * h) add_pair(t, sum);
        const cd cur = sum * h;
        if (level >= 3 && std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    throw ConvergenceError("tanh_sinh: refinement did not settle within level budget");
}

} // namespace sg
