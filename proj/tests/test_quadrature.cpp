#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "stable_stein/errors.hpp"
#include "stable_stein/quadrature.hpp"

using namespace stable_stein;

TEST_CASE("gk15 reproduces polynomial integrals exactly") {
    // the embedded Gauss-7 is exact to degree 13, Kronrod-15 beyond that
    auto quartic = [](double x) { return x * x * x * x; };
    const PanelResult r = gk15(quartic, 0.0, 1.0);
    CHECK(r.integral == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(r.error <= 1e-14);

    auto affine = [](double x) { return 3.0 * x - 7.0; };
    CHECK(gk15(affine, -2.0, 5.0).integral ==
          doctest::Approx(1.5 * (25.0 - 4.0) - 7.0 * 7.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration resolves endpoint singularities") {
    QuadOptions opt;
    opt.rel_tol = 1e-10;

    // int_0^1 x^(-1/2) dx = 2; nodes are interior so x = 0 is never touched
    auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };
    const double v1 =
        integrate_adaptive(inv_sqrt, geometric_breakpoints(0.0, 1.0, 0.0), opt);
    CHECK(v1 == doctest::Approx(2.0).epsilon(1e-9));

    // int_0^1 log x dx = -1
    auto lg = [](double x) { return std::log(x); };
    const double v2 =
        integrate_adaptive(lg, geometric_breakpoints(0.0, 1.0, 0.0), opt);
    CHECK(v2 == doctest::Approx(-1.0).epsilon(1e-9));

    // singularity at the right endpoint: int_0^1 (1-x)^(-1/3) dx = 3/2
    auto right_sing = [](double x) { return std::pow(1.0 - x, -1.0 / 3.0); };
    const double v3 =
        integrate_adaptive(right_sing, geometric_breakpoints(0.0, 1.0, 1.0), opt);
    CHECK(v3 == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("oscillatory integrals converge under the abs_scale floor") {
    QuadOptions opt;
    opt.rel_tol = 1e-9;
    opt.abs_scale = 1.0;

    // int_0^(9.5 pi) sin x dx = 1 - cos(9.5 pi) = 1 exactly
    const double upper = 9.5 * M_PI;
    const double v =
        integrate_adaptive([](double x) { return std::sin(x); }, 0.0, upper, opt);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-8));

    // near-total cancellation: int_0^(40 pi) sin x dx = 0; without the floor
    // the relative test alone could never be met
    const double z =
        integrate_adaptive([](double x) { return std::sin(x); }, 0.0, 40.0 * M_PI, opt);
    CHECK(std::abs(z) <= 1e-8);
}

TEST_CASE("panel budget exhaustion raises NonConvergence") {
    QuadOptions opt;
    opt.rel_tol = 1e-14;
    opt.max_panels = 4;
    auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };
    CHECK_THROWS_AS(integrate_adaptive(inv_sqrt, 0.0, 1.0, opt), NonConvergence);
}

TEST_CASE("geometric breakpoints cluster at the requested edge") {
    const auto left = geometric_breakpoints(0.0, 1.0, 0.0, 1e-12, 14);
    CHECK(left.front() == 0.0);
    CHECK(left.back() == 1.0);
    for (std::size_t i = 1; i < left.size(); ++i) CHECK(left[i] > left[i - 1]);
    // panel touching the edge has the requested relative width
    CHECK(left[1] == doctest::Approx(1e-12).epsilon(1e-12));
    // widths grow away from the edge
    CHECK(left[2] - left[1] > left[1] - left[0]);

    const auto right = geometric_breakpoints(2.0, 6.0, 6.0, 1e-8, 10);
    CHECK(right.front() == 2.0);
    CHECK(right.back() == 6.0);
    CHECK(right[right.size() - 2] == doctest::Approx(6.0 - 4.0 * 1e-8).epsilon(1e-12));
}
