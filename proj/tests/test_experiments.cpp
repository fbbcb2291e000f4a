#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "stable_stein/attraction.hpp"
#include "stable_stein/errors.hpp"
#include "stable_stein/experiments.hpp"
#include "stable_stein/rng.hpp"

using namespace stable_stein;

namespace {

SampleBatch batch_of(std::vector<double> values) {
    SampleBatch b;
    b.values = std::move(values);
    return b;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("ks statistic against an explicit cdf") {
    auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };

    // the textbook two-point example
    CHECK(ks_statistic(batch_of({0.25, 0.75}), uniform_cdf) ==
          doctest::Approx(0.25).epsilon(1e-15));

    // points at exact plotting positions i/(n+1): sup gap is 1/(n+1)
    const int n = 99;
    std::vector<double> qs;
    for (int i = 1; i <= n; ++i) qs.push_back(double(i) / (n + 1));
    CHECK(ks_statistic(batch_of(qs), uniform_cdf) ==
          doctest::Approx(1.0 / (n + 1)).epsilon(1e-12));

    // order of the input must not matter
    std::vector<double> shuffled = qs;
    std::mt19937 rng(4);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(ks_statistic(batch_of(shuffled), uniform_cdf) ==
          ks_statistic(batch_of(qs), uniform_cdf));

    CHECK_THROWS_AS(ks_statistic(batch_of({}), uniform_cdf), EmptyBatch);
}

TEST_CASE("two-sample ks statistic") {
    const SampleBatch a = batch_of({0.1, 0.4, 0.9});
    CHECK(ks_statistic_two_sample(a, a) == 0.0);

    // disjoint supports: one ecdf finishes before the other starts
    const SampleBatch lo = batch_of({0.0, 0.1, 0.2});
    const SampleBatch hi = batch_of({1.0, 1.1});
    CHECK(ks_statistic_two_sample(lo, hi) == doctest::Approx(1.0).epsilon(1e-15));

    // interleaved, hand-computed: {1,3} vs {2,4} -> 1/2
    CHECK(ks_statistic_two_sample(batch_of({1.0, 3.0}), batch_of({2.0, 4.0})) ==
          doctest::Approx(0.5).epsilon(1e-15));

    std::vector<double> big, small;
    CounterRng r(12);
    for (int i = 0; i < 500; ++i) big.push_back(r.uniform01(i));
    for (int i = 0; i < 100; ++i) small.push_back(r.uniform01(1000 + i));
    const double d = ks_statistic_two_sample(batch_of(big), batch_of(small));
    CHECK(d > 0.0);
    CHECK(d < 0.2);  // both draws from the same distribution

    CHECK_THROWS_AS(ks_statistic_two_sample(batch_of({}), a), EmptyBatch);
}

TEST_CASE("log-log slope fit recovers exact power laws") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 10.0, 100.0, 1000.0})
        pts.emplace_back(x, 3.0 * std::pow(x, -1.0 / 3.0));
    const SlopeFit fit = fit_loglog_slope(pts);
    CHECK(fit.slope == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    REQUIRE(fit.ci.has_value());  // 4 points, bootstrap applies
    CHECK(fit.ci->first <= fit.slope);
    CHECK(fit.ci->second >= fit.slope);

    // two points: exact line, no resampling interval
    const SlopeFit two = fit_loglog_slope({{1.0, 2.0}, {100.0, 0.5}});
    CHECK(two.slope == doctest::Approx(std::log(0.25) / std::log(100.0)).epsilon(1e-12));
    CHECK(!two.ci.has_value());

    CHECK_THROWS_AS(fit_loglog_slope({{1.0, 2.0}}), DegenerateFit);
    CHECK_THROWS_AS(fit_loglog_slope({{1.0, 2.0}, {1.0, 3.0}}), DegenerateFit);
    CHECK_THROWS_AS(fit_loglog_slope({{-1.0, 2.0}, {2.0, 3.0}}), DegenerateFit);
    CHECK_THROWS_AS(fit_loglog_slope({{1.0, 0.0}, {2.0, 3.0}}), DegenerateFit);
}

TEST_CASE("bootstrap interval covers the true slope in most replications") {
    const double truth = -1.0 / 3.0;
    const std::vector<double> xs = {10.0,   20.0,   50.0,   100.0,  200.0,  500.0,
                                    1000.0, 2000.0, 5000.0, 1e4,    2e4,    5e4};
    int covered = 0;
    for (int rep = 0; rep < 100; ++rep) {
        CounterRng noise(900 + rep);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            // mild lognormal scatter around the power law
            const double u1 = noise.uniform01(2 * i);
            const double u2 = noise.uniform01(2 * i + 1);
            const double z =
                std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            pts.emplace_back(xs[i], std::pow(xs[i], truth) * std::exp(0.03 * z));
        }
        const SlopeFit fit = fit_loglog_slope(pts, 2024 + rep);
        REQUIRE(fit.ci.has_value());
        if (fit.ci->first <= truth && truth <= fit.ci->second) ++covered;
    }
    CHECK(covered >= 90);
}

TEST_CASE("histogram density integrates to one and bins the edges") {
    std::vector<double> xs;
    CounterRng r(5);
    for (int i = 0; i < 1000; ++i) xs.push_back(r.uniform01(i));
    const auto f = histogram_density(xs, 0.0, 1.0, 20);
    REQUIRE(f.size() == 20);
    double mass = 0.0;
    for (double v : f) mass += v * (1.0 / 20);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(histogram_density({}, 0.0, 1.0, 4), EmptyBatch);
    CHECK_THROWS_AS(histogram_density({0.5}, 1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(histogram_density({0.5}, 0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("silverman bandwidth scales with the data") {
    std::vector<double> xs;
    CounterRng r(6);
    for (int i = 0; i < 400; ++i) xs.push_back(r.uniform01(i));
    const double h1 = silverman_bandwidth(xs);
    CHECK(h1 > 0.0);

    std::vector<double> scaled;
    for (double v : xs) scaled.push_back(7.0 * v);
    CHECK(silverman_bandwidth(scaled) == doctest::Approx(7.0 * h1).epsilon(1e-12));

    CHECK_THROWS_AS(silverman_bandwidth({1.0}), EmptyBatch);
}

namespace {

ExperimentConfig small_config(std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.law = pareto_preset(1.5);
    cfg.n_list = {50, 100};
    cfg.paths_list = {400, 400};
    cfg.M_list = {1.0, 2.0};
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("ks rate runs are deterministic across thread counts") {
    ExperimentConfig cfg = small_config(7);
    cfg.threads = 1;
    const ExperimentResult r1 = run_ks_rate(cfg);
    cfg.threads = 4;
    const ExperimentResult r2 = run_ks_rate(cfg);

    REQUIRE(r1.ks_rows.size() == 2);
    CHECK(r1.ks_mode == "exact-cdf");
    for (std::size_t i = 0; i < r1.ks_rows.size(); ++i) {
        CHECK(r1.ks_rows[i].ks == r2.ks_rows[i].ks);
        CHECK(r1.ks_rows[i].ks > 0.0);
        CHECK(r1.ks_rows[i].ks < 1.0);
    }
    REQUIRE(r1.slope.has_value());
    CHECK(r1.slope->slope == r2.slope->slope);

    cfg.two_sample_ks = true;
    cfg.stable_paths = 500;
    const ExperimentResult r3 = run_ks_rate(cfg);
    CHECK(r3.ks_mode == "two-sample-500");
    for (const KsRateRow& row : r3.ks_rows) CHECK(row.ks > 0.0);
}

TEST_CASE("call error cells carry coherent bounds and flags") {
    ExperimentConfig cfg = small_config(11);
    cfg.paths_list = {2000, 2000};
    const ExperimentResult res = run_call_error(cfg);
    REQUIRE(res.call_cells.size() == 4);  // 2 n values x 2 strikes
    for (const CallErrorCell& cell : res.call_cells) {
        CHECK(std::isfinite(cell.error));
        CHECK(cell.se >= 0.0);
        CHECK(cell.bound > 0.0);
        CHECK(cell.pass == (std::abs(cell.error) <= cell.bound + 3.0 * cell.se));
    }
}

TEST_CASE("n = 1 cells are unbiased against direct quadrature") {
    // with one summand, S_1 = X/sigma exactly, so E(S_1 - M)_+ has the
    // closed form 0.5 (sigma M)^(1-alpha) / ((alpha-1) sigma) for the
    // pareto preset whenever sigma M >= 1
    const double alpha = 1.5, M = 1.0;
    const AttractionLaw law = pareto_preset(alpha);
    const double sigma = sigma_norm(law).sigma;
    REQUIRE(sigma * M >= 1.0);
    const double exact =
        0.5 * std::pow(sigma * M, 1.0 - alpha) / ((alpha - 1.0) * sigma);

    const int reps = 50;
    const std::size_t paths = 4000;
    std::vector<double> means;
    for (int k = 0; k < reps; ++k) {
        SnConfig sc;
        sc.law = law;
        sc.n = 1;
        sc.paths = paths;
        sc.seed = 300 + k;
        const SampleBatch sn = build_Sn(sc);
        double acc = 0.0;
        for (double v : sn.values) acc += v > M ? v - M : 0.0;
        means.push_back(acc / paths);
    }
    double grand = 0.0;
    for (double m : means) grand += m;
    grand /= reps;
    double var = 0.0;
    for (double m : means) var += (m - grand) * (m - grand);
    const double se_grand = std::sqrt(var / (reps - 1.0) / reps);
    CHECK(std::abs(grand - exact) <= 3.0 * se_grand);
}

TEST_CASE("full experiment writes deterministic artifacts") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "stable_stein_exp_test";
    const fs::path d1 = base / "run1";
    const fs::path d2 = base / "run2";
    fs::remove_all(base);

    ExperimentConfig cfg = small_config(3);
    cfg.threads = 1;
    cfg.output_dir = d1.string();
    const ExperimentResult r1 = run_full_experiment(cfg);
    cfg.threads = 3;
    cfg.output_dir = d2.string();
    const ExperimentResult r2 = run_full_experiment(cfg);
    CHECK(r1.all_pass == r2.all_pass);

    for (const char* name :
         {"rates.csv", "call_error.csv", "density.csv", "report.json",
          "figure1a.svg", "figure1b.svg"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(d1 / name));
        const std::string b1 = slurp(d1 / name);
        CHECK(!b1.empty());
        CHECK(b1 == slurp(d2 / name));  // byte-identical across thread counts
    }

    const auto rep = nlohmann::ordered_json::parse(slurp(d1 / "report.json"));
    CHECK(rep.contains("config"));
    CHECK(rep.contains("slope"));
    CHECK(rep.contains("call_error"));
    CHECK(rep["config"]["preset"].get<std::string>() == "pareto");
    CHECK(rep["config"]["ks_mode"].get<std::string>() == "exact-cdf");

    // the overlay sharpens toward the limit as n grows: L1 distance to the
    // stable column must shrink from n=100 to n=1000
    std::ifstream csv(d1 / "density.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "y,f_n100,f_n500,f_n1000,f_stable");
    double l1_100 = 0.0, l1_1000 = 0.0;
    while (std::getline(csv, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double y, f100, f500, f1000, fs_;
        row >> y >> f100 >> f500 >> f1000 >> fs_;
        l1_100 += std::abs(f100 - fs_);
        l1_1000 += std::abs(f1000 - fs_);
    }
    CHECK(l1_1000 < l1_100);

    fs::remove_all(base);
}
