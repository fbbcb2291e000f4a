#pragma once

#include <cmath>

namespace stable_stein {

inline double gamma_fn(double x) { return std::tgamma(x); }

inline double beta_fn(double a, double b) {
    // Via lgamma to dodge overflow; all uses here have a,b > 0.
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// tan(pi*alpha/2), negative throughout alpha in (1,2). Computed as
// -cot(pi*(alpha-1)/2) to avoid the pole at alpha = 1 amplifying rounding.
inline double tan_half_pi(double alpha) {
    return -1.0 / std::tan(M_PI * 0.5 * (alpha - 1.0));
}

// The jump-kernel normalizer d_alpha = (int_0^inf (1-cos u)/u^{1+alpha} du)^{-1}.
// The integral has the closed form -Gamma(-alpha)*cos(pi*alpha/2) for
// alpha in (1,2), via the standard Levy-measure identity.
inline double cosine_integral(double alpha) {
    return -std::tgamma(-alpha) * std::cos(M_PI * 0.5 * alpha);
}

inline double d_alpha_const(double alpha) { return 1.0 / cosine_integral(alpha); }

}  // namespace stable_stein
