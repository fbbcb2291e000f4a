#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stable_stein/attraction.hpp"
#include "stable_stein/bounds.hpp"
#include "stable_stein/errors.hpp"
#include "stable_stein/experiments.hpp"
#include "stable_stein/sample_batch.hpp"
#include "stable_stein/stable_dist.hpp"
#include "stable_stein/stein.hpp"

namespace {

using namespace stable_stein;

const CLI::Validator open_alpha(
    [](std::string& s) {
        const double v = std::strtod(s.c_str(), nullptr);
        if (!(v > 1.0) || !(v < 2.0)) return std::string("must lie in the open interval (1,2)");
        return std::string();
    },
    "ALPHA");

struct LawFlags {
    std::string preset;
    double alpha = 1.5;
    double delta = 0.0;
    double A = 0.5;
    double gamma = 2.0;
    double L = 0.5;
    CLI::Option* opt_delta = nullptr;
    CLI::Option* opt_A = nullptr;
    CLI::Option* opt_gamma = nullptr;
    CLI::Option* opt_L = nullptr;

    void add_to(CLI::App* cmd, bool with_preset) {
        if (with_preset)
            cmd->add_option("--preset", preset, "parameter preset")
                ->check(CLI::IsMember({"pareto", "boundary"}));
        cmd->add_option("--alpha", alpha, "stability index, in (1,2)")
            ->check(open_alpha)
            ->capture_default_str();
        opt_delta = cmd->add_option("--delta", delta, "skewness, in [-1,1]")
                        ->check(CLI::Range(-1.0, 1.0))
                        ->capture_default_str();
        opt_A = cmd->add_option("--A", A, "tail scale, > 0")
                    ->check(CLI::PositiveNumber)
                    ->capture_default_str();
        opt_gamma = cmd->add_option("--gamma", gamma, "perturbation decay order, >= 0")
                        ->check(CLI::NonNegativeNumber)
                        ->capture_default_str();
        opt_L = cmd->add_option("--L", L, "perturbation magnitude, >= 0")
                    ->check(CLI::NonNegativeNumber)
                    ->capture_default_str();
    }

    AttractionLaw build() const {
        AttractionLaw law;
        if (preset == "pareto")
            law = pareto_preset(alpha);
        else if (preset == "boundary")
            law = boundary_preset(alpha);
        else {
            law.alpha = alpha;
            law.A = A;
            law.delta = delta;
            law.gamma = gamma;
            law.L = L;
        }
        if (!preset.empty()) {
            if (opt_delta->count() > 0) law.delta = delta;
            if (opt_A->count() > 0) law.A = A;
            if (opt_gamma->count() > 0) law.gamma = gamma;
            if (opt_L->count() > 0) law.L = L;
        }
        return law;
    }

    bool any_attraction_flag() const {
        return !preset.empty() || opt_A->count() > 0 || opt_gamma->count() > 0 ||
               opt_L->count() > 0;
    }
};

void print_line(const std::string& s) { std::fputs((s + "\n").c_str(), stdout); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-stable call-expectation toolkit"};
    app.set_config("--config", "", "config file with key = value lines, # comments; "
                                   "command-line flags take precedence");
    app.require_subcommand(1);

    double y = 0.0;
    double sigma = 1.0;
    double strike = 2.0;
    std::size_t count = 1000;
    std::size_t n_summands = 1000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_path;
    bool csv = false;

    CLI::App* density_cmd = app.add_subcommand("density", "stable density at a point");
    CLI::App* cdf_cmd = app.add_subcommand("cdf", "stable CDF at a point");
    CLI::App* sample_cmd =
        app.add_subcommand("sample", "draw seeded samples (stable law, or the "
                                     "attraction-domain law when --preset/--A/--gamma/"
                                     "--L is given)");
    CLI::App* call_cmd =
        app.add_subcommand("call", "call expectation E(Z - M)+ under the stable law");
    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "bound constants and rate as JSON");
    CLI::App* experiment_cmd = app.add_subcommand(
        "experiment", "rate, call-error, and density-overlay experiments");
    CLI::App* verify_cmd = app.add_subcommand(
        "verify-stein", "audit the Stein-equation solution (residuals, regularity)");

    LawFlags density_law, cdf_law, sample_law, call_law, bounds_law, exp_law, verify_law;

    density_law.add_to(density_cmd, false);
    density_cmd->add_option("--sigma", sigma, "scale, > 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    density_cmd->add_option("--y", y, "evaluation point")->capture_default_str();

    cdf_law.add_to(cdf_cmd, false);
    cdf_cmd->add_option("--sigma", sigma, "scale, > 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cdf_cmd->add_option("--y", y, "evaluation point")->capture_default_str();

    sample_law.add_to(sample_cmd, true);
    sample_cmd->add_option("--sigma", sigma, "scale for the stable law, > 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sample_cmd->add_option("--count", count, "number of draws, >= 1")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sample_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sample_cmd->add_option("--threads", threads, "worker cap, 0 = auto")
        ->capture_default_str();
    sample_cmd->add_option("--out", out_path,
                           "output file (.csv suffix writes CSV, else binary); "
                           "default prints CSV to stdout");
    sample_cmd->add_flag("--csv", csv, "force CSV format for --out");

    call_law.add_to(call_cmd, false);
    call_cmd->add_option("--M", strike, "strike, > 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    bounds_law.add_to(bounds_cmd, true);
    CLI::Option* bounds_n = bounds_cmd->add_option("--n", n_summands, "summand count, >= 1")
                                ->check(CLI::PositiveNumber)
                                ->capture_default_str();
    CLI::Option* bounds_m =
        bounds_cmd->add_option("--M", strike, "strike for the non-uniform constants, > 0")
            ->check(CLI::PositiveNumber);
    (void)bounds_n;

    exp_law.add_to(experiment_cmd, true);
    std::vector<std::size_t> n_list = {100, 1000, 10000, 100000};
    std::vector<std::size_t> paths_list;
    std::vector<double> m_list = {1.0, 2.0, 4.0};
    std::size_t stable_paths = 500;
    bool two_sample = false;
    bool nonuniform = false;
    double budget = 2e10;
    experiment_cmd->add_option("--n", n_list, "summand counts (list)")
        ->capture_default_str();
    experiment_cmd->add_option("--paths", paths_list,
                               "Monte Carlo paths per count (list, default = --n)");
    experiment_cmd->add_option("--M", m_list, "strikes (list)")->capture_default_str();
    experiment_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    experiment_cmd
        ->add_option("--stable-paths", stable_paths,
                     "reference batch size for two-sample KS")
        ->capture_default_str();
    experiment_cmd->add_flag("--two-sample-ks", two_sample,
                             "KS against a sampled reference instead of the exact CDF");
    experiment_cmd->add_flag("--nonuniform", nonuniform,
                             "use the strike-dependent bound in the call-error audit");
    experiment_cmd->add_option("--budget", budget, "draw budget, n * paths per cell")
        ->capture_default_str();
    experiment_cmd->add_option("--threads", threads, "worker cap, 0 = auto")
        ->capture_default_str();
    experiment_cmd->add_option("--out", out_path, "output directory (required)")
        ->required();

    verify_law.add_to(verify_cmd, false);
    verify_cmd->add_option("--M", strike, "strike, > 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (density_cmd->parsed()) {
            const StableParams p{density_law.alpha, sigma, density_law.delta};
            print_line(format_double(density(p, y)));
        } else if (cdf_cmd->parsed()) {
            const StableParams p{cdf_law.alpha, sigma, cdf_law.delta};
            print_line(format_double(stable_cdf(p, y)));
        } else if (sample_cmd->parsed()) {
            SampleBatch batch;
            if (sample_law.any_attraction_flag())
                batch = sample_attraction(sample_law.build(), count, seed, threads);
            else
                batch = sample_stable(
                    StableParams{sample_law.alpha, sigma, sample_law.delta}, count, seed);
            if (out_path.empty()) {
                batch.write_csv(std::cout);
            } else if (csv || out_path.ends_with(".csv")) {
                std::ofstream os(out_path, std::ios::binary);
                if (!os) throw std::invalid_argument("cannot open --out " + out_path);
                batch.write_csv(os);
            } else {
                batch.write_binary(out_path);
            }
        } else if (call_cmd->parsed()) {
            const StableParams p{call_law.alpha, 1.0, call_law.delta};
            print_line(format_double(call_expectation_stable(p, strike)));
        } else if (bounds_cmd->parsed()) {
            std::optional<double> maybe_m;
            if (bounds_m->count() > 0) maybe_m = strike;
            const BoundInputs in = make_bound_inputs(
                bounds_law.build(), static_cast<double>(n_summands), maybe_m);
            print_line(report_to_json(assemble_report(in)));
        } else if (experiment_cmd->parsed()) {
            ExperimentConfig cfg;
            cfg.law = exp_law.build();
            cfg.n_list = n_list;
            cfg.paths_list = paths_list.empty() ? n_list : paths_list;
            cfg.M_list = m_list;
            cfg.seed = seed;
            cfg.stable_paths = stable_paths;
            cfg.two_sample_ks = two_sample;
            cfg.nonuniform_bound = nonuniform;
            cfg.budget = budget;
            cfg.threads = threads;
            cfg.output_dir = out_path;
            const ExperimentResult res = run_full_experiment(cfg);
            std::ifstream is(out_path + "/report.json", std::ios::binary);
            std::ostringstream ss;
            ss << is.rdbuf();
            std::fputs(ss.str().c_str(), stdout);
            if (!res.all_pass) return 3;
        } else if (verify_cmd->parsed()) {
            const SteinVerifyReport rep =
                run_stein_verify(verify_law.alpha, verify_law.delta, strike);
            print_line(stein_report_to_json(rep));
            if (!rep.pass_all) return 3;
        }
    } catch (const NonConvergence& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const TailFitFailure& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const DivergentInput& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const DegenerateFit& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid request: %s\n", e.what());
        return 1;
    } catch (const std::runtime_error& e) {
        // InvalidLaw, UnsupportedSkew, UnsupportedGamma, BudgetExceeded,
        // MissingBData, EmptyBatch: all request-level problems
        std::fprintf(stderr, "invalid request: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
