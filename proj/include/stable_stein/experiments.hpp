#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stable_stein/attraction.hpp"
#include "stable_stein/sample_batch.hpp"

namespace stable_stein {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
    AttractionLaw law;
    std::vector<std::size_t> n_list = {100, 1000, 10000, 100000};
    std::vector<std::size_t> paths_list = {100, 1000, 10000, 100000};
    std::vector<double> M_list = {1.0, 2.0, 4.0};
    std::uint64_t seed = 1;
    std::size_t stable_paths = 500;   // reference batch for two-sample KS mode
    bool two_sample_ks = false;       // default compares against the exact CDF
    bool nonuniform_bound = false;    // call-error bound: strike-dependent constant
    std::string output_dir;           // empty = compute only, no files
    double budget = 2e10;             // admits the (1e5, 1e5) rate cell
    int threads = 0;
};

// one-sample KS distance against an exact CDF, evaluated at the jump points
double ks_statistic(const SampleBatch& samples,
                    const std::function<double(double)>& reference_cdf);

// two-sample KS distance between empirical CDFs
double ks_statistic_two_sample(const SampleBatch& a, const SampleBatch& b);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::optional<std::pair<double, double>> ci;  // bootstrap 95%, needs >= 4 points
};

// least squares on (ln x, ln y); studentized residual-bootstrap CI, 1000 resamples
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points,
                          std::uint64_t seed = 2024);

// histogram density estimate: bins of equal width on [lo, hi), values scaled so
// each bin holds (count in bin) / (samples.size() * bin width)
std::vector<double> histogram_density(const std::vector<double>& samples, double lo,
                                      double hi, std::size_t bins);

// Silverman's rule bandwidth from the sample standard deviation and IQR
double silverman_bandwidth(const std::vector<double>& xs);

struct KsRateRow {
    std::size_t n = 0;
    std::size_t paths = 0;
    double ks = 0.0;
};

struct CallErrorCell {
    std::size_t n = 0;
    double M = 0.0;
    double error = 0.0;  // MC estimate minus quadrature reference
    double se = 0.0;
    double bound = 0.0;
    bool pass = false;   // |error| <= bound + 3 se
};

struct ExperimentResult {
    std::vector<KsRateRow> ks_rows;
    std::optional<SlopeFit> slope;
    std::vector<std::size_t> excluded_n;  // dropped from the fit, see slope rule
    std::string ks_mode;
    std::vector<CallErrorCell> call_cells;
    bool all_pass = true;
};

// KS distance of S_n against the limit law per (n, paths) pair, with a fitted
// log-log rate; writes rates.csv and figure1a.svg when output_dir is set
ExperimentResult run_ks_rate(const ExperimentConfig& cfg);

// Monte Carlo call expectations against the quadrature reference, with the
// certified bound per cell; writes call_error.csv when output_dir is set
ExperimentResult run_call_error(const ExperimentConfig& cfg);

// empirical densities of S_n for n in {100, 500, 1000} (8000 paths each)
// against the exact density; writes density.csv and figure1b.svg
void run_density_overlay(const ExperimentConfig& cfg);

// all three runs plus report.json; requires output_dir
ExperimentResult run_full_experiment(const ExperimentConfig& cfg);

}  // namespace stable_stein
