#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stable_stein/sample_batch.hpp"

namespace stable_stein {

// Heavy-tailed law in the domain of attraction of an alpha-stable limit,
// described through its distribution function
//   F(x) = 1 - (A + B(x)) (1 + delta) / x^alpha     (x > 0)
//   F(x) =     (A + B(x)) (1 - delta) / |x|^alpha   (x < 0)
// with a remainder obeying |B(x)| <= L / |x|^gamma.
struct AttractionLaw {
    double alpha = 1.5;
    double A = 0.5;
    double delta = 0.0;
    double gamma = 2.0;
    double L = 0.5;
    std::function<double(double)> B;  // remainder, signed argument

    std::string preset;               // "pareto", "boundary" or empty
    double inner_edge = 0.0;          // F is flat on (-inner_edge, inner_edge)
    std::vector<double> kinks;        // |x| values where B changes branch
};

// Symmetric two-sided Pareto: density alpha/(2 |x|^(alpha+1)) outside [-1,1].
// A = 1/2, delta = 0, and the remainder B vanishes beyond |x| = 1 (gamma = 2).
AttractionLaw pareto_preset(double alpha);

// Symmetric law sitting exactly on the gamma = 2 - alpha boundary:
// B(x) = L |x|^(alpha-2) outside |x| = x0 with A = 1/2, L = 1/4, and the
// support edge x0 > 1 chosen so A + B is continuous.
AttractionLaw boundary_preset(double alpha);

// Checks parameter ranges and runs a 10^4-point monotonicity/range probe of
// the distribution function; throws InvalidLaw on any violation.
void validate_attraction_law(const AttractionLaw& law);

double cdf_attraction(const AttractionLaw& law, double x);
// Upper tail P(X >= x) for x > 0 evaluated directly, without 1 - F loss.
double survival_attraction(const AttractionLaw& law, double x);

// Inverse-CDF draws; presets with closed-form inverses bypass the generic
// bracketing bisection.
SampleBatch sample_attraction(const AttractionLaw& law, std::size_t n,
                              std::uint64_t seed, int threads = 0);

// Scale of the attracting stable law: sigma = (2 A alpha / d_alpha)^(1/alpha),
// returned together with d_alpha. The pair satisfies the defining relation
// exactly by construction.
struct StableScale {
    double sigma = 0.0;
    double d_alpha = 0.0;
};
StableScale sigma_norm(const AttractionLaw& law);

struct Moments {
    double mean = 0.0;        // E X
    double abs_mean = 0.0;    // E |X|
    double frac_central = 0.0;  // E |X - EX|^(2-alpha)
};
Moments mean_and_fractional_moments(const AttractionLaw& law);

// Remainder summaries entering the gamma = 0 rate: the weighted integral
// int_{|x|<=T} |B(x)| / |x|^(alpha-1) dx and sup_{|x|>=T} |B(x)|.
struct BTailData {
    double weighted_integral = 0.0;
    double sup_beyond = 0.0;
};
BTailData compute_b_data(const AttractionLaw& law, double threshold);

// Normalised partial sums S_n = (X_1 + ... + X_n - n EX) / (sigma n^(1/alpha)),
// one value per path, deterministic for a given seed at any worker count.
struct SnConfig {
    AttractionLaw law;
    std::size_t n = 100;
    std::size_t paths = 100;
    std::uint64_t seed = 1;
    double budget = 1e9;  // cap on n * paths total draws
    int threads = 0;
};
SampleBatch build_Sn(const SnConfig& cfg);

}  // namespace stable_stein
