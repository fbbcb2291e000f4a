#include "stable_stein/stein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "stable_stein/bounds.hpp"
#include "stable_stein/errors.hpp"
#include "stable_stein/parallel.hpp"
#include "stable_stein/quadrature.hpp"
#include "stable_stein/rng.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

namespace {

// (1 - w^alpha)^(1/alpha) without cancellation as w -> 1
double residual_scale(double w, double alpha) {
    if (w <= 0.0) return 1.0;
    if (w >= 1.0) return 0.0;
    return std::pow(-std::expm1(alpha * std::log1p(w - 1.0)), 1.0 / alpha);
}

// breakpoints on (0,1) clustered at both endpoints, optionally with one
// extra interior split
std::vector<double> unit_breakpoints(double extra = -1.0) {
    std::vector<double> bp = geometric_breakpoints(0.0, 0.5, 0.0);
    const std::vector<double> hi = geometric_breakpoints(0.5, 1.0, 1.0);
    bp.insert(bp.end(), hi.begin() + 1, hi.end());
    if (extra > 1e-9 && extra < 1.0 - 1e-9) {
        bp.push_back(extra);
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    }
    return bp;
}

// int_{y_cut}^inf h(c +- s z) coeff z^(-1-alpha) dz for h of at most linear
// growth.  Substituting z = y_cut / tau^q with q = 1/(alpha-1) bounds the
// transformed integrand even when h grows linearly.
template <class F>
double tail_expectation(const F& h, double c, double s, double coeff,
                        double y_cut, double alpha, bool right) {
    if (coeff <= 0.0) return 0.0;
    const double q = 1.0 / (alpha - 1.0);
    auto integrand = [&](double tau) {
        const double t = std::pow(tau, q);
        if (!(t > 0.0)) return 0.0;
        const double z = y_cut / t;
        if (!std::isfinite(z)) return 0.0;
        return t * h(right ? c + s * z : c - s * z);
    };
    QuadOptions opt;
    opt.rel_tol = 1e-9;
    opt.abs_scale = 1.0 + std::abs(c) + s * y_cut;
    const double inner =
        integrate_adaptive(integrand, geometric_breakpoints(0.0, 1.0, 0.0), opt);
    return coeff * std::pow(y_cut, -alpha) * q * inner;
}

// E h(c + s Z) over the tabulated density: composite Simpson across the grid
// cells plus fitted power tails
template <class F>
double expect_lipschitz(const DensityGrid& grid, const F& h, double c, double s) {
    const auto& y = grid.nodes();
    const auto& p = grid.densities();
    const auto& pm = grid.midpoint_densities();
    double sum = 0.0;
    double right_val = h(c + s * y[0]) * p[0];
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const double left_val = right_val;
        const double width = y[i + 1] - y[i];
        const double mid = 0.5 * (y[i] + y[i + 1]);
        right_val = h(c + s * y[i + 1]) * p[i + 1];
        sum += width / 6.0 * (left_val + 4.0 * h(c + s * mid) * pm[i] + right_val);
    }
    const double y_cut = y.back();
    const double alpha = grid.alpha();
    sum += tail_expectation(h, c, s, grid.tail_coeff_right(), y_cut, alpha, true);
    sum += tail_expectation(h, c, s, grid.tail_coeff_left(), y_cut, alpha, false);
    return sum;
}

}  // namespace

SteinTestFn SteinTestFn::call_fn(double M) {
    SteinTestFn out;
    out.tag = Tag::call;
    out.strike = M;
    out.g = [M](double x) { return x > M ? x - M : 0.0; };
    return out;
}

SteinTestFn SteinTestFn::identity_fn() {
    SteinTestFn out;
    out.tag = Tag::identity;
    out.g = [](double x) { return x; };
    return out;
}

SteinTestFn SteinTestFn::custom_fn(std::function<double(double)> g) {
    SteinTestFn out;
    out.tag = Tag::custom;
    out.g = std::move(g);
    return out;
}

SteinSolution::SteinSolution(SteinTestFn g, double alpha, double delta)
    : g_(std::move(g)), alpha_(alpha), delta_(delta) {
    StableParams check{alpha, 1.0, delta};
    check.validate();
    grid_ = shared_density_grid(alpha, delta);
    if (g_.tag == SteinTestFn::Tag::call) {
        nu_ = grid_->call_price(g_.strike);
    } else {
        nu_ = expect_lipschitz(*grid_, g_.g, 0.0, 1.0);
    }
}

// E g(shift + scale Z)
double SteinSolution::inner_expectation(double shift, double scale) const {
    if (scale <= 0.0) return g_(shift);
    if (g_.tag == SteinTestFn::Tag::call)
        return scale * grid_->call_price((g_.strike - shift) / scale);
    return expect_lipschitz(*grid_, g_.g, shift, scale);
}

// E g'(shift + scale Z), with g' replaced by a central difference for
// custom test functions (exact for call and identity up to the difference
// step, which is immaterial for piecewise-linear g away from the kink)
double SteinSolution::inner_derivative(double shift, double scale) const {
    if (g_.tag == SteinTestFn::Tag::call) {
        if (scale <= 0.0) return shift > g_.strike ? 1.0 : (shift < g_.strike ? 0.0 : 0.5);
        return grid_->survival((g_.strike - shift) / scale);
    }
    const double step = 1e-3;
    auto fn = g_.g;
    auto gd = [fn, step](double x) { return (fn(x + step) - fn(x - step)) / (2.0 * step); };
    if (scale <= 0.0) return gd(shift);
    return expect_lipschitz(*grid_, gd, shift, scale);
}

double SteinSolution::value(double y) const {
    const double extra =
        (g_.tag == SteinTestFn::Tag::call && y != 0.0) ? g_.strike / y : -1.0;
    auto integrand = [&](double w) {
        const double s = residual_scale(w, alpha_);
        return (inner_expectation(w * y, s) - nu_) / w;
    };
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_scale = 1.0 + std::abs(y) +
                    (g_.tag == SteinTestFn::Tag::call ? std::abs(g_.strike) : 0.0);
    return -alpha_ * integrate_adaptive(integrand, unit_breakpoints(extra), opt);
}

double SteinSolution::fprime(double y) const {
    const double extra =
        (g_.tag == SteinTestFn::Tag::call && y != 0.0) ? g_.strike / y : -1.0;
    auto integrand = [&](double w) {
        return inner_derivative(w * y, residual_scale(w, alpha_));
    };
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_scale = 1.0;
    return -alpha_ * integrate_adaptive(integrand, unit_breakpoints(extra), opt);
}

double SteinSolution::fprime_limit_neg() const {
    if (g_.tag == SteinTestFn::Tag::call) return 0.0;
    return fprime(-1e6);
}

double SteinSolution::fprime_limit_pos() const {
    if (g_.tag == SteinTestFn::Tag::call) return -alpha_;
    return fprime(1e6);
}

namespace {

// generator applied to the Stein solution, written with the once-integrated
// kernel: A f(y) = d_alpha/(2 alpha) [ (1+delta) I+ - (1-delta) I- ] with
// I+- = int_0^inf (f'(y +- v) - f'(y)) v^(-alpha) dv.  The head below v0
// uses a first-order Taylor model of f', the tail beyond V the constant
// limit of f'.
double generator_from_fprime(const SteinSolution& sol, double y) {
    const double alpha = sol.alpha();
    const double delta = sol.delta();
    const double fp0 = sol.fprime(y);
    const double step = 1e-3;
    const double f2 = (sol.fprime(y + step) - sol.fprime(y - step)) / (2.0 * step);
    const double v0 = 1e-4;
    const double v_max = 1e5;
    std::vector<double> bp;
    for (double v = v0; v < v_max; v *= 4.0) bp.push_back(v);
    bp.push_back(v_max);
    QuadOptions opt;
    opt.rel_tol = 1e-8;
    opt.abs_scale = alpha;

    auto one_side = [&](double sign, double limit) {
        auto integrand = [&](double v) {
            return (sol.fprime(y + sign * v) - fp0) * std::pow(v, -alpha);
        };
        const double quad = integrate_adaptive(integrand, bp, opt);
        const double head = sign * f2 * std::pow(v0, 2.0 - alpha) / (2.0 - alpha);
        const double tail = (limit - fp0) * std::pow(v_max, 1.0 - alpha) / (alpha - 1.0);
        return quad + head + tail;
    };

    const double plus = one_side(1.0, sol.fprime_limit_pos());
    const double minus = one_side(-1.0, sol.fprime_limit_neg());
    return d_alpha_const(alpha) / (2.0 * alpha) *
           ((1.0 + delta) * plus - (1.0 - delta) * minus);
}

double residual_at(const SteinSolution& sol, double y) {
    const double lhs = generator_from_fprime(sol, y) -
                       y * sol.fprime(y) / sol.alpha();
    return lhs - (sol.test_fn()(y) - sol.nu_g());
}

}  // namespace

double generator_apply(const std::function<double(double)>& f, double alpha,
                       double delta, double y) {
    StableParams check{alpha, 1.0, delta};
    check.validate();

    // growth probe: superlinear growth makes the outer integral diverge
    const double offsets[4] = {10.0, 100.0, 1000.0, 10000.0};
    for (double sign : {1.0, -1.0}) {
        double slope_first = 0.0;
        double slope_last = 0.0;
        for (int k = 0; k + 1 < 4; ++k) {
            const double va = f(y + sign * offsets[k]);
            const double vb = f(y + sign * offsets[k + 1]);
            if (!std::isfinite(va) || !std::isfinite(vb))
                throw DivergentInput("test function not finite at probe points");
            const double slope = std::abs(vb - va) / (offsets[k + 1] - offsets[k]);
            if (k == 0) slope_first = slope;
            slope_last = slope;
        }
        if (slope_last > 5.0 * (slope_first + 1.0))
            throw DivergentInput("test function grows faster than linearly");
    }

    const double f0 = f(y);
    const double h = 1e-2;
    const double fp0 = (f(y - 2.0 * h) - 8.0 * f(y - h) + 8.0 * f(y + h) -
                        f(y + 2.0 * h)) /
                       (12.0 * h);
    const double f2 = (-f(y + 2.0 * h) + 16.0 * f(y + h) - 30.0 * f0 +
                       16.0 * f(y - h) - f(y - 2.0 * h)) /
                      (12.0 * h * h);

    // linear asymptote per side, used to close the far tail analytically
    const double far = 1e6;
    const double a_plus = (f(y + 2.0 * far) - f(y + far)) / far;
    const double b_plus = f(y + 2.0 * far) - a_plus * (y + 2.0 * far);
    const double a_minus = (f(y - far) - f(y - 2.0 * far)) / far;
    const double b_minus = f(y - 2.0 * far) - a_minus * (y - 2.0 * far);

    const double u0 = 1e-4;
    const double u_max = 1e6;
    std::vector<double> bp_inner;
    for (double u = u0; u < 1.0; u *= 4.0) bp_inner.push_back(u);
    bp_inner.push_back(1.0);
    std::vector<double> bp_outer;
    for (double u = 1.0; u < u_max; u *= 4.0) bp_outer.push_back(u);
    bp_outer.push_back(u_max);

    QuadOptions opt_inner;
    opt_inner.rel_tol = 1e-8;
    opt_inner.abs_scale = 1.0 + std::abs(f2);
    QuadOptions opt_outer;
    opt_outer.rel_tol = 1e-6;
    opt_outer.abs_scale = 1.0 + std::abs(fp0);
    opt_outer.max_panels = 250000;

    auto one_side = [&](double sign, double a_far, double b_far) {
        auto inner = [&](double u) {
            return (f(y + sign * u) - f0 - sign * u * fp0) * std::pow(u, -1.0 - alpha);
        };
        auto outer = [&](double u) {
            return (f(y + sign * u) - f0) * std::pow(u, -1.0 - alpha);
        };
        // head below u0: second-order Taylor remainder
        double total = f2 * std::pow(u0, 2.0 - alpha) / (2.0 * (2.0 - alpha));
        total += integrate_adaptive(inner, bp_inner, opt_inner);
        total += integrate_adaptive(outer, bp_outer, opt_outer);
        // the -u f'(y) part of the numerator, exactly over [1, inf)
        total -= sign * fp0 / (alpha - 1.0);
        // far tail of f - f0 under the linear model a_far x + b_far
        total += sign * a_far * std::pow(u_max, 1.0 - alpha) / (alpha - 1.0) +
                 (a_far * y + b_far - f0) * std::pow(u_max, -alpha) / alpha;
        return total;
    };

    const double plus = one_side(1.0, a_plus, b_plus);
    const double minus = one_side(-1.0, a_minus, b_minus);
    return d_alpha_const(alpha) / 2.0 * ((1.0 + delta) * plus + (1.0 - delta) * minus);
}

double stein_solution(const SteinTestFn& g, double alpha, double delta, double y) {
    return SteinSolution(g, alpha, delta).value(y);
}

double stein_fprime(const SteinTestFn& g, double alpha, double delta, double y) {
    return SteinSolution(g, alpha, delta).fprime(y);
}

double stein_fprime_call(double M, double alpha, double delta, double y) {
    if (!(M > 0.0)) throw std::invalid_argument("strike must be positive");
    return SteinSolution(SteinTestFn::call_fn(M), alpha, delta).fprime(y);
}

double stein_residual(const SteinTestFn& g, double alpha, double delta, double y) {
    return residual_at(SteinSolution(g, alpha, delta), y);
}

double second_derivative_grid_sup(const SteinTestFn& g, double alpha, double delta,
                                  const std::vector<double>& ys) {
    if (ys.empty()) throw std::invalid_argument("empty evaluation grid");
    SteinSolution sol(g, alpha, delta);
    const double h = 1e-3;
    double sup = 0.0;
    for (double y : ys) {
        const double d2 = (sol.fprime(y + h) - sol.fprime(y - h)) / (2.0 * h);
        sup = std::max(sup, std::abs(d2));
    }
    return sup;
}

SampleBatch sample_xtilde(const TailLawXtilde& t, std::size_t n, std::uint64_t seed) {
    if (!(t.alpha > 1.0) || !(t.alpha < 2.0))
        throw InvalidLaw("alpha must lie in (1,2); got " + format_double(t.alpha));
    if (!(t.A > 0.0)) throw InvalidLaw("A must be positive");
    if (!(t.delta >= -1.0) || !(t.delta <= 1.0))
        throw InvalidLaw("delta must lie in [-1,1]");
    SampleBatch batch;
    batch.seed = seed;
    batch.values.assign(n, 0.0);
    {
        std::ostringstream os;
        os << "xtilde alpha=" << format_double(t.alpha) << " A=" << format_double(t.A)
           << " delta=" << format_double(t.delta) << " n=" << n;
        batch.origin = os.str();
    }
    const double split = 0.5 * (1.0 - t.delta);
    const double inv_alpha = 1.0 / t.alpha;
    CounterRng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01(i);
        if (u < split)
            batch.values[i] = -std::pow(t.A * (1.0 - t.delta) / u, inv_alpha);
        else
            batch.values[i] = std::pow(t.A * (1.0 + t.delta) / (1.0 - u), inv_alpha);
    }
    return batch;
}

namespace {

// f' evaluated through a table on the compactified axis u = y/(1+|y|),
// with the O(1/|y|) approach to the limits handled analytically beyond
// the table
class FprimeTable {
  public:
    FprimeTable(const SteinSolution& sol, int threads) : alpha_(sol.alpha()) {
        const int n = 4001;
        u_max_ = 0.999;
        y_max_ = u_max_ / (1.0 - u_max_);
        values_.assign(n, 0.0);
        parallel_blocks(n, 64, threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double u = -u_max_ + 2.0 * u_max_ * double(i) / (n - 1);
                values_[i] = sol.fprime(u / (1.0 - std::abs(u)));
            }
        });
    }

    double operator()(double y) const {
        const double u = y / (1.0 + std::abs(y));
        if (u >= u_max_)
            return -alpha_ + (values_.back() + alpha_) * (y_max_ / y);
        if (u <= -u_max_) return values_.front() * (y_max_ / -y);
        const double x = (u + u_max_) / (2.0 * u_max_) * double(values_.size() - 1);
        const std::size_t i = static_cast<std::size_t>(x);
        const double frac = x - double(i);
        return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
    }

  private:
    double alpha_;
    double u_max_;
    double y_max_;
    std::vector<double> values_;
};

}  // namespace

TaylorCheck taylor_remainder_check(const AttractionLaw& law, double M, double a,
                                   std::size_t mc_paths, std::uint64_t seed,
                                   int threads) {
    validate_attraction_law(law);
    const double alpha = law.alpha;
    if (!(M > 2.0)) throw std::invalid_argument("strike must exceed 2");
    const double a_cap = std::min(std::pow(2.0 * law.A, -1.0 / alpha), 1.0);
    if (!(a > 0.0) || !(a < a_cap))
        throw std::invalid_argument("scale a must lie in (0, " + format_double(a_cap) +
                                    "); got " + format_double(a));
    if (mc_paths == 0) throw std::invalid_argument("mc_paths must be positive");
    if (mc_paths > 200000000ull)
        throw BudgetExceeded("mc_paths " + std::to_string(mc_paths) +
                             " exceeds the 2e8 budget");
    std::string note;
    const GammaRegime regime = classify_gamma(alpha, law.gamma, &note);
    if (regime == GammaRegime::above)
        throw UnsupportedGamma(
            "remainder bound covers gamma <= 2 - alpha only; got gamma = " +
            format_double(law.gamma));

    SteinSolution sol(SteinTestFn::call_fn(M), alpha, law.delta);
    const double nu = sol.nu_g();
    const FprimeTable fp(sol, threads);
    const double mean_x = mean_and_fractional_moments(law).mean;
    const double kappa = 2.0 * law.A * alpha * alpha / d_alpha_const(alpha) *
                         std::pow(a, alpha - 1.0);

    const std::uint64_t seed_y = CounterRng(seed, 101).word(0);
    const std::uint64_t seed_x = CounterRng(seed, 202).word(0);
    const SampleBatch ys = sample_stable(StableParams{alpha, 1.0, law.delta},
                                         mc_paths, seed_y);
    const SampleBatch xs = sample_attraction(law, mc_paths, seed_x, threads);

    const std::size_t block = 65536;
    const std::size_t n_blocks = (mc_paths + block - 1) / block;
    std::vector<long double> sums(n_blocks, 0.0L);
    std::vector<long double> sq_sums(n_blocks, 0.0L);
    parallel_blocks(mc_paths, block, threads, [&](std::size_t lo, std::size_t hi) {
        long double s1 = 0.0L;
        long double s2 = 0.0L;
        for (std::size_t i = lo; i < hi; ++i) {
            const double yv = ys.values[i];
            const double xv = xs.values[i];
            const double call = yv > M ? yv - M : 0.0;
            const double gen = kappa * (yv * fp(yv) / alpha + call - nu);
            const double z = xv * fp(yv + a * xv) - mean_x * fp(yv) - gen;
            s1 += z;
            s2 += static_cast<long double>(z) * z;
        }
        sums[lo / block] = s1;
        sq_sums[lo / block] = s2;
    });
    long double total = 0.0L;
    long double total_sq = 0.0L;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        total += sums[b];
        total_sq += sq_sums[b];
    }
    const double n = static_cast<double>(mc_paths);
    const double mean_z = static_cast<double>(total / mc_paths);
    const double var =
        std::max(0.0L, (total_sq - total * total / mc_paths) / (n - 1.0)) / n;

    TaylorCheck out;
    out.T_hat = std::abs(mean_z);
    out.se = std::sqrt(static_cast<double>(var));
    out.regime = regime_label(regime);

    const EtaConstants eta = eta_constants(alpha, law.delta, true);
    const double A = law.A;
    const double L = law.L;
    const double q1 =
        (8.0 * alpha * alpha * (A + L) - 4.0 * alpha * L) / ((alpha - 1.0) * eta.eta3);
    const double two_a = std::pow(2.0 * A, 2.0 / alpha);
    const double e3 =
        (alpha * alpha - 1.0) / (alpha * alpha + 2.0 * alpha - 1.0);
    const double e2 = 2.0 * (alpha - 1.0) / (3.0 * alpha - 1.0);
    if (regime == GammaRegime::boundary) {
        out.bound = 2.0 * alpha * two_a * eta.eta3 * a /
                        ((2.0 - alpha) * std::pow(M, e3)) +
                    eta.eta3 * ((2.0 * two_a + 8.0 * L / (alpha - 1.0)) + q1) *
                        2.0 * (alpha - 1.0) * a * std::abs(std::log(a)) *
                        std::log(M) / ((3.0 * alpha - 1.0) * std::pow(M, e2));
    } else if (regime == GammaRegime::below) {
        out.bound = eta.eta3 *
                    ((4.0 * two_a / (2.0 - alpha) + 8.0 * L / (2.0 - alpha - law.gamma)) +
                     q1) *
                    std::pow(a, (1.0 - alpha) / (law.gamma - 1.0)) *
                    std::pow(M, -e2 * (alpha - 1.0) / (1.0 - law.gamma));
    } else {
        const BTailData tail = compute_b_data(law, 1.0 / a);
        const double m_pow = std::pow(M, -e2 * (alpha - 1.0));
        out.bound = 2.0 * alpha * two_a * *eta.eta4 * a /
                        ((2.0 - alpha) * std::pow(M, e3)) +
                    4.0 * eta.eta3 * a * m_pow * tail.weighted_integral +
                    eta.eta3 * ((8.0 / (2.0 - alpha) + 2.0 * two_a) + q1) *
                        std::pow(a, alpha - 1.0) *
                        std::pow(tail.sup_beyond, alpha - 1.0) * m_pow;
    }
    return out;
}

SteinVerifyReport run_stein_verify(double alpha, double delta, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("strike must be positive");
    SteinVerifyReport rep;
    rep.alpha = alpha;
    rep.delta = delta;
    rep.M = M;

    SteinSolution sol(SteinTestFn::call_fn(M), alpha, delta);
    const double residual_pts[7] = {-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0};
    rep.pass_residual = true;
    for (double y : residual_pts) {
        const double r = std::abs(residual_at(sol, y));
        rep.residual_max = std::max(rep.residual_max, r);
        if (r > 1e-3 * (1.0 + std::abs(sol.test_fn()(y)))) rep.pass_residual = false;
    }

    const double h = 1e-3;
    for (int i = 0; i <= 160; ++i) {
        const double y = -20.0 + 0.25 * i;
        rep.fprime_sup = std::max(rep.fprime_sup, std::abs(sol.fprime(y)));
        const double d2 = (sol.fprime(y + h) - sol.fprime(y - h)) / (2.0 * h);
        rep.fsecond_sup = std::max(rep.fsecond_sup, std::abs(d2));
    }

    const EtaConstants eta = eta_constants(alpha, delta, true);
    rep.bound_uniform = 4.0 * eta.eta2;
    rep.pass_fprime = rep.fprime_sup <= alpha + 1e-4;
    rep.pass_fsecond_uniform = rep.fsecond_sup <= rep.bound_uniform + 1e-3;
    rep.pass_all = rep.pass_residual && rep.pass_fprime && rep.pass_fsecond_uniform;
    if (M > 2.0) {
        const double e2 = 2.0 * (alpha - 1.0) / (3.0 * alpha - 1.0);
        rep.bound_nonuniform = eta.eta3 * std::pow(M, -e2);
        rep.pass_fsecond_nonuniform = rep.fsecond_sup <= *rep.bound_nonuniform + 1e-3;
        rep.pass_all = rep.pass_all && *rep.pass_fsecond_nonuniform;
    }
    if (delta == 0.0) {
        const double e3 =
            (alpha * alpha - 1.0) / (alpha * alpha + 2.0 * alpha - 1.0);
        rep.bound_symmetric = *eta.eta4 * std::pow(M, -e3);
        rep.pass_fsecond_symmetric = rep.fsecond_sup <= *rep.bound_symmetric + 1e-3;
        rep.pass_all = rep.pass_all && *rep.pass_fsecond_symmetric;
    }
    return rep;
}

std::string stein_report_to_json(const SteinVerifyReport& rep) {
    nlohmann::ordered_json j;
    j["alpha"] = rep.alpha;
    j["delta"] = rep.delta;
    j["M"] = rep.M;
    j["residual_max"] = rep.residual_max;
    j["fprime_sup"] = rep.fprime_sup;
    j["fsecond_sup"] = rep.fsecond_sup;
    j["bounds"]["uniform"] = rep.bound_uniform;
    j["bounds"]["nonuniform"] =
        rep.bound_nonuniform ? nlohmann::ordered_json(*rep.bound_nonuniform)
                             : nlohmann::ordered_json(nullptr);
    j["bounds"]["symmetric"] =
        rep.bound_symmetric ? nlohmann::ordered_json(*rep.bound_symmetric)
                            : nlohmann::ordered_json(nullptr);
    j["pass"]["residual"] = rep.pass_residual;
    j["pass"]["fprime"] = rep.pass_fprime;
    j["pass"]["fsecond_uniform"] = rep.pass_fsecond_uniform;
    j["pass"]["fsecond_nonuniform"] =
        rep.pass_fsecond_nonuniform ? nlohmann::ordered_json(*rep.pass_fsecond_nonuniform)
                                    : nlohmann::ordered_json(nullptr);
    j["pass"]["fsecond_symmetric"] =
        rep.pass_fsecond_symmetric ? nlohmann::ordered_json(*rep.pass_fsecond_symmetric)
                                   : nlohmann::ordered_json(nullptr);
    j["pass"]["all"] = rep.pass_all;
    return j.dump(2);
}

}  // namespace stable_stein
