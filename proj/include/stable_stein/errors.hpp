#pragma once

#include <stdexcept>
#include <string>

namespace stable_stein {

// Numerical failure: adaptive quadrature could not meet its tolerance.
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// A law definition failed validation (monotonicity, parameter domain).
struct InvalidLaw : std::runtime_error {
    explicit InvalidLaw(const std::string& what) : std::runtime_error(what) {}
};

// The requested skew is outside what the configured sampler supports.
struct UnsupportedSkew : std::runtime_error {
    explicit UnsupportedSkew(const std::string& what) : std::runtime_error(what) {}
};

// A Monte Carlo request exceeds the configured draw budget.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Rate/constant evaluation at gamma = 0 without the required B(x) data.
struct MissingBData : std::runtime_error {
    explicit MissingBData(const std::string& what) : std::runtime_error(what) {}
};

// The log-log tail fit of a density grid failed its quality gate.
struct TailFitFailure : std::runtime_error {
    explicit TailFitFailure(const std::string& what) : std::runtime_error(what) {}
};

// An operation that needs samples received an empty batch.
struct EmptyBatch : std::runtime_error {
    explicit EmptyBatch(const std::string& what) : std::runtime_error(what) {}
};

// A regression fit got too few (or non-distinct) points.
struct DegenerateFit : std::runtime_error {
    explicit DegenerateFit(const std::string& what) : std::runtime_error(what) {}
};

// A function handle grows too fast for the integral operator applied to it.
struct DivergentInput : std::runtime_error {
    explicit DivergentInput(const std::string& what) : std::runtime_error(what) {}
};

// The Taylor-like remainder bound only covers gamma in (0, 2-alpha] and gamma = 0.
struct UnsupportedGamma : std::runtime_error {
    explicit UnsupportedGamma(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stable_stein
