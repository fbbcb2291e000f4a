#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "stable_stein/sample_batch.hpp"

namespace stable_stein {

// Strictly stable law with stability index alpha in (1,2), scale sigma > 0
// and skewness delta in [-1,1]. The characteristic function is
//   E exp(i lambda X) = exp(-sigma^alpha |lambda|^alpha
//                           (1 - i delta sgn(lambda) tan(pi alpha / 2))),
// so the mean is zero for every delta.
struct StableParams {
    double alpha = 1.5;
    double sigma = 1.0;
    double delta = 0.0;

    void validate() const;  // throws InvalidLaw outside the ranges above
};

std::complex<double> char_fn(const StableParams& p, double lambda);

// One half-line oscillatory integral
//   I_r(y) = int_0^inf lambda^r exp(-lambda^alpha)
//            cos(lambda^alpha delta tan(pi alpha/2) - lambda y) dlambda,
// and J_r(y), the same with sin. Everything is in unit scale (sigma = 1).
struct OscIntegralSpec {
    double alpha = 1.5;
    double r = 0.0;  // power of lambda, must be > -1
    double delta = 0.0;
    double y = 0.0;
    double rel_tol = 1e-8;
    double lambda_max = 0.0;  // 0 = choose so exp(-lambda_max^alpha) < rel_tol/10
};

enum class OscKind { cosine, sine };

double osc_integral(const OscIntegralSpec& spec, OscKind kind);

// Gamma((r+1)/alpha)/alpha, a hard bound on |I_r| and |J_r| and the
// absolute scale the adaptive integrator tests convergence against.
double osc_integral_envelope(double alpha, double r);

// Unit-scale density and its y-derivative: p = I_0/pi, p' = J_1/pi near the
// center; beyond |y| ~ 30 both switch to the heavy-tail series expansion.
double density(const StableParams& p, double y, double rel_tol = 1e-8);
double density_deriv(const StableParams& p, double y, double rel_tol = 1e-8);

// Number of leading tail-series terms summed, exposed for the series vs
// quadrature overlap test.
double density_tail_series(double alpha, double delta, double y, int max_terms = 16);

// Tabulated unit-scale density with cumulative mass and first-moment caches.
// The node layout is a uniform center panel on [-hw, hw] plus geometric tail
// panels out to y_cut on each side; beyond y_cut both tails close with the
// exact term-by-term integrals of the heavy-tail series.
class DensityGrid {
  public:
    struct Options {
        int center_points = 2001;       // uniform nodes on [-hw, hw]
        int tail_points = 1000;         // geometric nodes per side
        double center_halfwidth = 2.0;  // hw
        double y_cut = 1500.0;          // outermost tabulated |y|
        double rel_tol = 1e-8;          // per-point density tolerance
    };

    DensityGrid(double alpha, double delta) : DensityGrid(alpha, delta, Options{}) {}
    DensityGrid(double alpha, double delta, const Options& opt);

    double alpha() const { return alpha_; }
    double delta() const { return delta_; }

    double pdf(double y) const;       // interpolated inside, extrapolated outside
    double cdf(double y) const;
    double survival(double y) const;  // accumulated from the right, no 1-F cancellation

    // E (Z - K)_+ for the unit-scale law, any real K.
    double call_price(double K) const;

    // Leading tail constants: p(y) ~ coeff * |y|^-(alpha+1). Zero on a side
    // whose tail is lighter than polynomial (delta = -1 right, +1 left).
    double tail_coeff_right() const { return c_right_; }
    double tail_coeff_left() const { return c_left_; }

    // Accuracy the tabulated masses are good to (integration rule error).
    double built_tol() const { return built_tol_; }
    // | total mass - 1 | actually realised by the table plus tail fits.
    double mass_defect() const { return mass_defect_; }

    const std::vector<double>& nodes() const { return y_; }
    const std::vector<double>& densities() const { return p_; }
    // density at cell midpoints, size nodes().size() - 1
    const std::vector<double>& midpoint_densities() const { return pm_; }

    void write_csv(std::ostream& os) const;  // header y,p

  private:
    struct TailFit {
        double coeff = 0.0;
        double slope = 0.0;
        double r2 = 1.0;
        bool light = false;  // tail numerically zero (|delta| = 1 short side)
    };
    TailFit fit_tail(bool right_side) const;
    std::size_t cell_of(double y) const;
    double cell_mass(std::size_t i, double y_to) const;
    double cell_first_moment(std::size_t i, double y_to) const;

    double alpha_, delta_;
    Options opt_;
    std::vector<double> y_;     // nodes, ascending
    std::vector<double> p_;     // density at nodes
    std::vector<double> pm_;    // density at cell midpoints, size n-1
    std::vector<double> F_;     // mass of (-inf, y_i]
    std::vector<double> S_;     // mass of [y_i, inf), accumulated from the right
    std::vector<double> G_;     // int_{y_i}^{y_cut} t p(t) dt plus right tail moment
    double c_right_ = 0.0, c_left_ = 0.0;
    double r2_right_ = 1.0, r2_left_ = 1.0;
    bool light_right_ = false, light_left_ = false;
    double built_tol_ = 1e-6;
    double mass_defect_ = 0.0;

    friend double call_expectation_stable(const StableParams&, double, double);
};

// Shared per-(alpha, delta) grid cache; grids are immutable once built.
std::shared_ptr<const DensityGrid> shared_density_grid(double alpha, double delta);

// CDF of the sigma-scaled law via the shared grid.
double stable_cdf(const StableParams& p, double y);

// E (X - M)_+ for X ~ stable(p), M > 0. Throws TailFitFailure if the grid's
// right-tail power fit is too poor to extrapolate (R^2 < 0.999).
double call_expectation_stable(const StableParams& p, double M, double rel_tol = 1e-8);

// Chambers-Mallows-Stuck draws. The general-skew branch can be disabled to
// force symmetric-only operation; sampling with delta != 0 then throws
// UnsupportedSkew.
SampleBatch sample_stable(const StableParams& p, std::size_t n, std::uint64_t seed,
                          bool allow_general_skew = true);

// Single CMS draw from two uniforms u, w in (0,1); unit scale.
double cms_draw(double alpha, double delta, double u_angle, double u_exp);

}  // namespace stable_stein
