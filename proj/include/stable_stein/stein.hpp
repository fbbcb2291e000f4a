#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stable_stein/attraction.hpp"
#include "stable_stein/sample_batch.hpp"
#include "stable_stein/stable_dist.hpp"

namespace stable_stein {

// Test function for the Stein equation; always Lipschitz with constant 1.
// The call payoff x -> (x - strike)_+ and the identity get dedicated fast
// paths; arbitrary Lipschitz handles go through grid expectations.
struct SteinTestFn {
    enum class Tag { call, identity, custom };

    Tag tag = Tag::identity;
    double strike = 0.0;  // call tag only
    std::function<double(double)> g;

    static SteinTestFn call_fn(double M);
    static SteinTestFn identity_fn();
    static SteinTestFn custom_fn(std::function<double(double)> g);

    double operator()(double x) const { return g(x); }
};

// Solution f of the equation  (A f)(y) - y f'(y)/alpha = g(y) - nu(g),
// where A is the stable jump generator and nu the unit-scale stable law.
// f(y) folds the semigroup action of nu on g into a single scale integral;
// f'(y) does the same with the almost-everywhere derivative of g, which for
// the call payoff collapses to a survival value of the scaled law.
class SteinSolution {
  public:
    SteinSolution(SteinTestFn g, double alpha, double delta);

    double value(double y) const;
    double fprime(double y) const;

    double nu_g() const { return nu_; }
    double alpha() const { return alpha_; }
    double delta() const { return delta_; }
    const SteinTestFn& test_fn() const { return g_; }

    // f' tends to a constant on each side (slope of the linear asymptote of
    // f); used to close the generator integral beyond the quadrature window.
    double fprime_limit_neg() const;
    double fprime_limit_pos() const;

    double rel_tol = 1e-9;

  private:
    double inner_expectation(double shift, double scale) const;
    double inner_derivative(double shift, double scale) const;

    SteinTestFn g_;
    double alpha_ = 1.5;
    double delta_ = 0.0;
    double nu_ = 0.0;
    std::shared_ptr<const DensityGrid> grid_;
};

// Jump generator applied to a twice-differentiable handle:
//   (A f)(y) = d_alpha int [f(y+u) - f(y) - u f'(y)]
//              * [(1+delta) 1_{u>0} + (1-delta) 1_{u<0}] / (2|u|^(1+alpha)) du.
// f' and f'' at y come from central differences of the handle; the integral
// is truncated with analytic tail closures from the linear asymptotes of f.
// Throws DivergentInput when a probe detects super-linear growth.
double generator_apply(const std::function<double(double)>& f, double alpha,
                       double delta, double y);

// Derivative of the Stein solution for the call payoff at strike M:
//   f'(y) = -alpha int_0^1 survival((M - w y) / (1 - w^alpha)^(1/alpha)) dw,
// always in [-alpha, 0].
double stein_fprime_call(double M, double alpha, double delta, double y);

// One-off evaluations; loops over y should construct SteinSolution once.
double stein_solution(const SteinTestFn& g, double alpha, double delta, double y);
double stein_fprime(const SteinTestFn& g, double alpha, double delta, double y);

// (A f_g)(y) - y f'_g(y)/alpha - g(y) + nu(g). The generator term is
// evaluated from f' through the once-integrated jump kernel, so a residual
// near zero certifies generator, solution and nu against each other.
double stein_residual(const SteinTestFn& g, double alpha, double delta, double y);

// max over ys of |f''_g| by central differences of f' (step 1e-3).
double second_derivative_grid_sup(const SteinTestFn& g, double alpha, double delta,
                                  const std::vector<double>& ys);

// Pure power-tail law: no mass inside (-(2A)^(1/alpha), (2A)^(1/alpha)),
// upper tail A(1+delta)/x^alpha, lower tail A(1-delta)/|x|^alpha.
struct TailLawXtilde {
    double A = 0.5;
    double alpha = 1.5;
    double delta = 0.0;
};

SampleBatch sample_xtilde(const TailLawXtilde& t, std::size_t n, std::uint64_t seed);

// Monte Carlo audit of the Taylor-like remainder
//   T = | E[X f'(Y + aX)] - E[X] E[f'(Y)]
//         - (2 A alpha^2 / d_alpha) a^(alpha-1) E[(A f)(Y)] |
// for f the call solution at strike M, Y unit-scale stable, X from the law.
// `bound` is the printed analytic bound for the law's remainder-decay case.
struct TaylorCheck {
    double T_hat = 0.0;
    double bound = 0.0;
    double se = 0.0;
    std::string regime;
};

TaylorCheck taylor_remainder_check(const AttractionLaw& law, double M, double a,
                                   std::size_t mc_paths, std::uint64_t seed,
                                   int threads = 0);

// Self-audit bundle behind the verify-stein subcommand: residuals on a fixed
// probe set, derivative sups on [-20, 20], and the regularity ceilings they
// must sit under.
struct SteinVerifyReport {
    double alpha = 0.0, delta = 0.0, M = 0.0;
    double residual_max = 0.0;
    double fprime_sup = 0.0;
    double fsecond_sup = 0.0;
    double bound_uniform = 0.0;                // 4 eta2
    std::optional<double> bound_nonuniform;    // strike-decay ceiling, M > 2
    std::optional<double> bound_symmetric;     // sharper ceiling, delta = 0
    bool pass_residual = false;
    bool pass_fprime = false;
    bool pass_fsecond_uniform = false;
    std::optional<bool> pass_fsecond_nonuniform;
    std::optional<bool> pass_fsecond_symmetric;
    bool pass_all = false;
};

SteinVerifyReport run_stein_verify(double alpha, double delta, double M);
std::string stein_report_to_json(const SteinVerifyReport& rep);

}  // namespace stable_stein
