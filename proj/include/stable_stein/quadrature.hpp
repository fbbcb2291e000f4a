#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "stable_stein/errors.hpp"

namespace stable_stein {

// 15-point Gauss-Kronrod rule on [-1,1]; the embedded 7-point Gauss rule
// supplies the error estimate. Nodes are interior, so integrable endpoint
// singularities never get evaluated directly.
namespace gk15_detail {
inline constexpr double nodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
inline constexpr double kronrod_w[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
// Gauss-7 weights aligned with the odd Kronrod nodes (indices 1,3,...,13).
inline constexpr double gauss_w[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};
}  // namespace gk15_detail

struct PanelResult {
    double integral;
    double error;
};

template <class F>
PanelResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kr = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * gk15_detail::nodes[i]);
        kr += gk15_detail::kronrod_w[i] * v;
        if (i % 2 == 1) g += gk15_detail::gauss_w[i / 2] * v;
    }
    kr *= h;
    g *= h;
    // QUADPACK-style sharpened estimate; plain |kr-g| is too pessimistic.
    const double diff = std::abs(kr - g);
    return {kr, std::pow(200.0 * diff, 1.5) < diff ? std::pow(200.0 * diff, 1.5) : diff};
}

struct QuadOptions {
    double rel_tol = 1e-8;
    // Result scale for the absolute tolerance floor: convergence is declared
    // when total_error <= max(rel_tol * |integral|, rel_tol * abs_scale).
    // Essential for oscillatory integrals whose value is far below the
    // integrand's magnitude.
    double abs_scale = 0.0;
    std::size_t max_panels = 20000;
};

// Globally adaptive bisection over an initial panel list: always split the
// panel with the largest error estimate.
template <class F>
double integrate_adaptive(const F& f, const std::vector<double>& breakpoints,
                          const QuadOptions& opt = {}) {
    struct Seg {
        double a, b, integral, error;
        bool operator<(const Seg& o) const { return error < o.error; }
    };
    std::priority_queue<Seg> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const auto r = gk15(f, breakpoints[i], breakpoints[i + 1]);
        heap.push({breakpoints[i], breakpoints[i + 1], r.integral, r.error});
        total += r.integral;
        err += r.error;
    }
    auto tol = [&] { return std::max(opt.rel_tol * std::abs(total), opt.rel_tol * opt.abs_scale); };
    while (err > tol() && heap.size() < opt.max_panels) {
        const Seg s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) {  // interval at machine resolution
            err -= s.error;
            continue;
        }
        const auto l = gk15(f, s.a, m);
        const auto r = gk15(f, m, s.b);
        total += l.integral + r.integral - s.integral;
        err += l.error + r.error - s.error;
        heap.push({s.a, m, l.integral, l.error});
        heap.push({m, s.b, r.integral, r.error});
    }
    if (err > tol() * 10.0)
        throw NonConvergence("adaptive quadrature stalled: error " + std::to_string(err) +
                             " over [" + std::to_string(breakpoints.front()) + ", " +
                             std::to_string(breakpoints.back()) + "]");
    return total;
}

template <class F>
double integrate_adaptive(const F& f, double a, double b, const QuadOptions& opt = {}) {
    return integrate_adaptive(f, std::vector<double>{a, b}, opt);
}

// Geometric subdivision of [a,b] clustered toward `edge` (one of a or b),
// for integrable endpoint singularities and boundary layers. first_frac is
// the relative width of the panel touching the edge.
inline std::vector<double> geometric_breakpoints(double a, double b, double edge,
                                                 double first_frac = 1e-12, int n = 14) {
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n) + 2);
    const double len = b - a;
    pts.push_back(a);
    for (int i = n; i >= 1; --i) {
        const double off = len * std::pow(first_frac, double(i) / double(n));
        pts.push_back(edge <= a ? a + off : b - off);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace stable_stein
