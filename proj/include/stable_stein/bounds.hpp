#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stable_stein/attraction.hpp"

namespace stable_stein {

// Heat-kernel and regularity constants. tan(pi alpha/2) is negative on (1,2)
// and enters verbatim with its sign; a max-branch that comes out nonpositive
// is reported in `warnings`, never clamped.
struct EtaConstants {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta3 = 0.0;
    std::optional<double> eta4;  // independent of delta
    std::vector<std::string> warnings;
};
EtaConstants eta_constants(double alpha, double delta, bool include_eta4 = true);

// Everything the bound constants consume, precomputed by the caller.
struct BoundInputs {
    AttractionLaw law;
    double n = 100;
    std::optional<double> M;      // strike; absent = uniform bound only
    Moments moments;
    double sigma = 0.0;
    double d_alpha = 0.0;
    std::optional<double> B_integral;  // int_{|x|<=sigma n^(1/alpha)} |B|/|x|^(alpha-1)
    std::optional<double> B_sup_tail;  // sup_{|x|>=sigma n^(1/alpha)} |B|
};

// Convenience: fills moments, sigma/d_alpha, and (for gamma = 0) the B data.
BoundInputs make_bound_inputs(const AttractionLaw& law, double n,
                              std::optional<double> M);

enum class GammaRegime { above, boundary, below, zero };
GammaRegime classify_gamma(double alpha, double gamma, std::string* note = nullptr);
std::string regime_label(GammaRegime r);

double rate_Rn(double alpha, double gamma, double sigma, double n,
               std::optional<double> B_integral = std::nullopt,
               std::optional<double> B_sup_tail = std::nullopt);

double const_c1(const BoundInputs& in);

// (c2M, c3M); c3M only when delta = 0.
std::pair<double, std::optional<double>> const_c2M_c3M(const BoundInputs& in);

struct BoundReport {
    double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0, eta4 = 0.0;
    double q1 = 0.0, q2 = 0.0;
    double Rn = 0.0;
    double c1 = 0.0;
    std::optional<double> c2M, c3M;
    double uniform_bound = 0.0;                 // c1 * Rn
    std::optional<double> nonuniform_bound;     // min(c2M, c3M when present) * Rn
    std::string regime;
    // audit trail
    double alpha = 0.0, delta = 0.0, gamma = 0.0, n = 0.0;
    std::optional<double> M;
    double sigma = 0.0, d_alpha = 0.0;
    std::vector<std::string> warnings, notes;
};

BoundReport assemble_report(const BoundInputs& in);

// JSON with the key order fixed as listed in BoundReport.
std::string report_to_json(const BoundReport& rep);

}  // namespace stable_stein
