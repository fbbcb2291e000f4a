#include "stable_stein/attraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "stable_stein/errors.hpp"
#include "stable_stein/parallel.hpp"
#include "stable_stein/quadrature.hpp"
#include "stable_stein/rng.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

namespace {

void check_ranges(const AttractionLaw& law) {
    if (!(law.alpha > 1.0) || !(law.alpha < 2.0))
        throw InvalidLaw("alpha must lie in (1,2)");
    if (!(law.A > 0.0)) throw InvalidLaw("tail constant A must be positive");
    if (!(law.delta >= -1.0) || !(law.delta <= 1.0))
        throw InvalidLaw("delta must lie in [-1,1]");
    if (!(law.gamma >= 0.0)) throw InvalidLaw("gamma must be nonnegative");
    if (!(law.L >= 0.0)) throw InvalidLaw("L must be nonnegative");
    if (!law.B) throw InvalidLaw("remainder handle B is not set");
}

}  // namespace

double cdf_attraction(const AttractionLaw& law, double x) {
    if (law.inner_edge > 0.0 && std::abs(x) < law.inner_edge)
        return 0.5 * (1.0 - law.delta);
    if (x == 0.0) return 0.5 * (1.0 - law.delta);
    const double tail = (law.A + law.B(x)) * std::pow(std::abs(x), -law.alpha);
    if (x > 0.0) return 1.0 - tail * (1.0 + law.delta);
    return tail * (1.0 - law.delta);
}

double survival_attraction(const AttractionLaw& law, double x) {
    if (x <= 0.0) return 1.0 - cdf_attraction(law, x);
    if (law.inner_edge > 0.0 && x < law.inner_edge) return 0.5 * (1.0 + law.delta);
    return (law.A + law.B(x)) * (1.0 + law.delta) * std::pow(x, -law.alpha);
}

void validate_attraction_law(const AttractionLaw& law) {
    check_ranges(law);
    const int npts = 10000;
    double prev = 0.0;
    for (int i = 0; i < npts; ++i) {
        // tan-spaced probe covering both tails densely
        const double u = (-0.5 + (i + 0.5) / npts) * (std::numbers::pi - 2e-3);
        const double x = std::tan(u);
        const double f = cdf_attraction(law, x);
        if (!(f >= 0.0) || !(f <= 1.0))
            throw InvalidLaw("distribution function leaves [0,1] at x = " +
                             format_double(x));
        if (i > 0 && f < prev - 1e-12)
            throw InvalidLaw("distribution function decreases at x = " +
                             format_double(x));
        prev = f;
    }
}

AttractionLaw pareto_preset(double alpha) {
    AttractionLaw law;
    law.alpha = alpha;
    law.A = 0.5;
    law.delta = 0.0;
    law.gamma = 2.0;
    law.L = 0.5;
    law.B = [alpha](double x) {
        const double ax = std::abs(x);
        return ax <= 1.0 ? 0.5 * std::pow(ax, alpha) - 0.5 : 0.0;
    };
    law.preset = "pareto";
    law.inner_edge = 1.0;
    law.kinks = {1.0};
    check_ranges(law);
    return law;
}

AttractionLaw boundary_preset(double alpha) {
    AttractionLaw law;
    law.alpha = alpha;
    law.A = 0.5;
    law.delta = 0.0;
    law.gamma = 2.0 - alpha;
    law.L = 0.25;
    // Support edge: A + B continuous there, x0^alpha/2 = A + L x0^(alpha-2).
    double lo = 1.0, hi = 4.0;
    auto gap = [&](double x) {
        return 0.5 * std::pow(x, alpha) - law.A - law.L * std::pow(x, alpha - 2.0);
    };
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    const double x0 = 0.5 * (lo + hi);
    const double A = law.A, L = law.L;
    law.B = [alpha, x0, A, L](double x) {
        const double ax = std::abs(x);
        return ax < x0 ? 0.5 * std::pow(ax, alpha) - A : L * std::pow(ax, alpha - 2.0);
    };
    law.preset = "boundary";
    law.inner_edge = x0;
    law.kinks = {x0};
    check_ranges(law);
    return law;
}

namespace {

// Generalized inverse of F by bracketed bisection (converges through flat
// stretches to sup{x : F(x) < u}).
double invert_cdf(const AttractionLaw& law, double u) {
    double hi = std::max(2.0, 2.0 * law.inner_edge);
    double lo = -hi;
    for (int i = 0; i < 80 && cdf_attraction(law, hi) < u; ++i) hi *= 4.0;
    for (int i = 0; i < 80 && cdf_attraction(law, lo) > u; ++i) lo *= 4.0;
    if (cdf_attraction(law, hi) < u || cdf_attraction(law, lo) > u)
        throw NonConvergence("inverse CDF bracket not found for u = " +
                             format_double(u));
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
        (cdf_attraction(law, mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SampleBatch sample_attraction(const AttractionLaw& law, std::size_t n,
                              std::uint64_t seed, int threads) {
    validate_attraction_law(law);
    SampleBatch batch;
    batch.seed = seed;
    batch.values.assign(n, 0.0);
    {
        std::ostringstream os;
        os << "attraction preset=" << (law.preset.empty() ? "custom" : law.preset)
           << " alpha=" << format_double(law.alpha) << " n=" << n;
        batch.origin = os.str();
    }
    CounterRng rng(seed);
    if (law.preset == "pareto") {
        const double inv_alpha = 1.0 / law.alpha;
        parallel_blocks(n, 65536, threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const std::uint64_t r = rng.word(i);
                const double v = ((r >> 11) + 0.5) * 0x1.0p-53;
                const double mag = std::pow(v, -inv_alpha);
                batch.values[i] = (r & 1) ? mag : -mag;
            }
        });
    } else {
        parallel_blocks(n, 4096, threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                batch.values[i] = invert_cdf(law, rng.uniform01(i));
        });
    }
    return batch;
}

StableScale sigma_norm(const AttractionLaw& law) {
    check_ranges(law);
    StableScale s;
    s.d_alpha = d_alpha_const(law.alpha);
    s.sigma = std::pow(2.0 * law.A * law.alpha / s.d_alpha, 1.0 / law.alpha);
    return s;
}

namespace {

// int_X^inf h(x) dx for h ~ c x^-beta, beta > 1: x = X t^-k with k = 2/(beta-1)
// turns the integrand into ~t near t = 0, which the panels resolve exactly.
template <class H>
double power_tail_integral(const H& h, double X, double beta, const QuadOptions& opt) {
    const double k = 2.0 / (beta - 1.0);
    auto tail = [&](double t) {
        const double x = X * std::pow(t, -k);
        if (!std::isfinite(x)) return 0.0;
        const double hv = h(x);
        if (hv == 0.0) return 0.0;
        return hv * k * X * std::pow(t, -k - 1.0);
    };
    return integrate_adaptive(tail, geometric_breakpoints(0.0, 1.0, 0.0, 1e-10, 12), opt);
}

std::vector<double> sorted_panel(std::vector<double> pts, double lo, double hi) {
    std::erase_if(pts, [&](double v) { return !(v > lo) || !(v < hi); });
    pts.push_back(lo);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace

Moments mean_and_fractional_moments(const AttractionLaw& law) {
    check_ranges(law);
    QuadOptions opt;
    opt.rel_tol = 1e-11;

    std::vector<double> marks{law.inner_edge, 1.0, 10.0};
    marks.insert(marks.end(), law.kinks.begin(), law.kinks.end());

    auto S_pos = [&](double x) { return survival_attraction(law, x); };
    auto F_neg = [&](double x) { return cdf_attraction(law, -x); };  // x > 0

    auto half_line = [&](const auto& h) {  // int_0^inf h, h ~ x^-alpha
        return integrate_adaptive(h, sorted_panel(marks, 0.0, 100.0), opt) +
               power_tail_integral(h, 100.0, law.alpha, opt);
    };
    const double pos = half_line(S_pos);
    const double neg = half_line(F_neg);

    Moments m;
    m.mean = pos - neg;
    m.abs_mean = pos + neg;

    // E|X-mu|^q = int_0^inf S(mu + v^(1/q)) dv + int_0^inf F(mu - v^(1/q)) dv
    // (v = |x-mu|^q absorbs the kernel singularity of the direct form).
    const double mu = m.mean;
    const double q = 2.0 - law.alpha;
    auto up = [&](double v) {
        return survival_attraction(law, mu + std::pow(v, 1.0 / q));
    };
    auto dn = [&](double v) {
        return cdf_attraction(law, mu - std::pow(v, 1.0 / q));
    };
    auto v_side = [&](const auto& h, bool upper) {
        std::vector<double> vmarks;
        for (double d : marks) {
            const double dist = upper ? d - mu : d + mu;
            if (dist > 0.0) vmarks.push_back(std::pow(dist, q));
        }
        const double V = std::pow(100.0 + std::abs(mu), q);
        return integrate_adaptive(h, sorted_panel(vmarks, 0.0, V), opt) +
               power_tail_integral(h, V, law.alpha / q, opt);
    };
    m.frac_central = v_side(up, true) + v_side(dn, false);
    return m;
}

BTailData compute_b_data(const AttractionLaw& law, double threshold) {
    check_ranges(law);
    if (!(threshold > 0.0))
        throw std::invalid_argument("B-data threshold must be positive");
    QuadOptions opt;
    opt.rel_tol = 1e-10;
    BTailData out;

    // int_0^T |B(x)| x^(1-alpha) dx with x = u^(1/(2-alpha)): the Jacobian
    // cancels the weight, leaving the bounded integrand |B| / (2-alpha).
    const double q = 2.0 - law.alpha;
    auto one_side = [&](double sgn) {
        auto f = [&](double u) {
            return std::abs(law.B(sgn * std::pow(u, 1.0 / q))) / q;
        };
        std::vector<double> umarks;
        for (double k : law.kinks) umarks.push_back(std::pow(k, q));
        return integrate_adaptive(f, sorted_panel(umarks, 0.0, std::pow(threshold, q)),
                                  opt);
    };
    out.weighted_integral = one_side(1.0) + one_side(-1.0);

    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = threshold * std::pow(1e6, i / 400.0);
        sup = std::max({sup, std::abs(law.B(x)), std::abs(law.B(-x))});
    }
    for (double k : law.kinks)
        if (k >= threshold) sup = std::max({sup, std::abs(law.B(k)), std::abs(law.B(-k))});
    out.sup_beyond = sup;
    return out;
}

SampleBatch build_Sn(const SnConfig& cfg) {
    validate_attraction_law(cfg.law);
    if (cfg.n == 0 || cfg.paths == 0) throw EmptyBatch("need n >= 1 and paths >= 1");
    const double draws = static_cast<double>(cfg.n) * static_cast<double>(cfg.paths);
    if (draws > cfg.budget)
        throw BudgetExceeded("n * paths = " + format_double(draws) +
                             " exceeds budget " + format_double(cfg.budget));

    const Moments mom = mean_and_fractional_moments(cfg.law);
    const bool symmetric_preset =
        cfg.law.preset == "pareto" || cfg.law.preset == "boundary";
    if (symmetric_preset && std::abs(mom.mean) > 1e-8)
        throw NonConvergence("numeric mean " + format_double(mom.mean) +
                             " should vanish for a symmetric preset");
    const StableScale sc = sigma_norm(cfg.law);
    const double norm = sc.sigma * std::pow(static_cast<double>(cfg.n), 1.0 / cfg.law.alpha);
    const double shift = static_cast<double>(cfg.n) * mom.mean;

    SampleBatch batch;
    batch.seed = cfg.seed;
    batch.values.assign(cfg.paths, 0.0);
    {
        std::ostringstream os;
        os << "Sn preset=" << (cfg.law.preset.empty() ? "custom" : cfg.law.preset)
           << " alpha=" << format_double(cfg.law.alpha) << " n=" << cfg.n
           << " paths=" << cfg.paths;
        batch.origin = os.str();
    }
    CounterRng rng(cfg.seed);
    const std::uint64_t n64 = cfg.n;
    if (cfg.law.preset == "pareto") {
        const double inv_alpha = 1.0 / cfg.law.alpha;
        parallel_blocks(cfg.paths, 16, cfg.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t j = lo; j < hi; ++j) {
                double acc = 0.0;
                const std::uint64_t base = j * n64;
                for (std::uint64_t i = 0; i < n64; ++i) {
                    const std::uint64_t r = rng.word(base + i);
                    const double v = ((r >> 11) + 0.5) * 0x1.0p-53;
                    const double mag = std::pow(v, -inv_alpha);
                    acc += (r & 1) ? mag : -mag;
                }
                batch.values[j] = (acc - shift) / norm;
            }
        });
    } else {
        parallel_blocks(cfg.paths, 4, cfg.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t j = lo; j < hi; ++j) {
                double acc = 0.0;
                const std::uint64_t base = j * n64;
                for (std::uint64_t i = 0; i < n64; ++i)
                    acc += invert_cdf(cfg.law, rng.uniform01(base + i));
                batch.values[j] = (acc - shift) / norm;
            }
        });
    }
    return batch;
}

}  // namespace stable_stein
