#include "riseval/quadrature.hpp"
#include "riseval/specfun.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace riseval::quad;

TEST_CASE("finite integrals")
{
    const auto lin = integrate_finite([](double x) { return x; }, 0.0, 1.0);
    CHECK(lin.converged);
    CHECK(lin.value == doctest::Approx(0.5).epsilon(1e-15));

    QuadratureSpec tight{.rel_tol = 1e-12, .abs_tol = 1e-14};
    const auto sine = integrate_finite([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, tight);
    CHECK(std::abs(sine.value - 2.0) < 1e-10);

    const auto log_sing = integrate_finite([](double x) { return -std::log(x); }, 0.0, 1.0, tight);
    CHECK(std::abs(log_sing.value - 1.0) < 1e-7);
    CHECK(log_sing.converged);

    CHECK(integrate_finite([](double) { return 3.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("converged outcomes honour the tolerance they claim")
{
    QuadratureSpec spec{.rel_tol = 1e-9, .abs_tol = 1e-14};
    const auto r = integrate_finite([](double x) { return std::exp(-x) * std::cos(5 * x); }, 0.0, 3.0, spec);
    CHECK(r.converged);
    CHECK(r.est_error <= std::max(spec.rel_tol * std::abs(r.value), spec.abs_tol));
    const double exact = (1.0 - std::exp(-3.0) * (std::cos(15.0) - 5.0 * std::sin(15.0))) / 26.0;
    CHECK(std::abs(r.value - exact) < 1e-12);
}

TEST_CASE("subdivision budget exhaustion is reported, not hidden")
{
    QuadratureSpec spec{.rel_tol = 1e-14, .abs_tol = 1e-300, .max_subdivisions = 3};
    const auto r = integrate_finite([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, spec);
    CHECK_FALSE(r.converged);
    CHECK(std::isfinite(r.value));
}

TEST_CASE("non-finite integrand values abort with the abscissa")
{
    try {
        integrate_finite([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }, 0.0, 1.0);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.abscissa() > 0.5);
        CHECK(e.abscissa() < 1.0);
    }
}

TEST_CASE("semi-infinite integrals")
{
    const auto e = integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-9));

    const auto g = integrate_semi_infinite([](double x) { return x * std::exp(-std::numbers::pi * x * x); }, 0.0);
    CHECK(g.value == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-9));

    const double lb = 1e-5;
    const double a = 2.0 * std::numbers::pi * std::sqrt(lb * lb);
    QuadratureSpec spec{.rel_tol = 1e-10, .abs_tol = 1e-14, .scale = 1.0 / a};
    const auto k0 = integrate_semi_infinite(
        [&](double x) { return 4.0 * std::numbers::pi * std::numbers::pi * lb * lb * x * riseval::specfun::bessel_k0(a * x); },
        0.0, spec);
    CHECK(k0.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("both infinity maps agree on Gaussian tails")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> centre(-2.0, 5.0);
    std::uniform_real_distribution<double> width(0.2, 4.0);
    for (int i = 0; i < 25; ++i) {
        const double mu = centre(gen);
        const double w = width(gen);
        const auto f = [=](double x) { return std::exp(-0.5 * (x - mu) * (x - mu) / (w * w)); };
        QuadratureSpec rational{.rel_tol = 1e-10, .abs_tol = 1e-14, .infinity_map = InfinityMap::Rational, .scale = w};
        QuadratureSpec expo{.rel_tol = 1e-10, .abs_tol = 1e-14, .infinity_map = InfinityMap::Exponential, .scale = w};
        const auto r = integrate_semi_infinite(f, 0.0, rational);
        const auto x = integrate_semi_infinite(f, 0.0, expo);
        const double exact = w * std::sqrt(std::numbers::pi / 2.0) * std::erfc(-mu / (w * std::sqrt(2.0)));
        CHECK(std::abs(r.value - x.value) <= r.est_error + x.est_error + 1e-12 * exact);
        CHECK(std::abs(r.value - exact) <= 1e-9 * exact);
    }
}

TEST_CASE("tightening the tolerance never moves away from the answer")
{
    const auto f = [](double x) { return 1.0 / (1.0 + x * x * x * x); };
    const double exact = std::numbers::pi / (2.0 * std::sqrt(2.0));
    double last = std::numeric_limits<double>::infinity();
    for (double tol : {1e-4, 5e-5, 2.5e-5, 1e-6, 1e-8, 1e-10}) {
        QuadratureSpec spec{.rel_tol = tol, .abs_tol = 1e-300};
        const double err = std::abs(integrate_semi_infinite(f, 0.0, spec).value - exact);
        CHECK(err <= last + 1e-15);
        last = err;
    }
}

TEST_CASE("breakpoints and tails")
{
    const double bp[] = {0.0, 1.0, 2.0, 10.0};
    const auto r = integrate_with_breakpoints([](double x) { return std::exp(-x); }, bp, true);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    const auto f = integrate_with_breakpoints([](double x) { return std::abs(x - 1.0); }, bp, false);
    CHECK(f.value == doctest::Approx(0.5 + 0.5 + 40.0).epsilon(1e-12));
}

TEST_CASE("nested two-dimensional integrals")
{
    QuadratureSpec spec{.rel_tol = 1e-9, .abs_tol = 1e-13};
    const auto unbounded = [](double) { return infinity; };
    const auto full = integrate_2d_semi_infinite([](double x, double y) { return std::exp(-x - y); }, unbounded, spec);
    CHECK(full.value == doctest::Approx(1.0).epsilon(1e-8));

    // Split at x2 = 1/x1: both sides reassemble the quadrant, and the upper
    // side has the closed inner integral e^(-x1 - 1/x1).
    const auto bound = [](double x1) { return 1.0 / x1; };
    const auto f = [](double x1, double x2) { return std::exp(-x1 - x2); };
    const auto below = integrate_2d_semi_infinite(f, bound, spec, spec, InnerSide::Below);
    const auto above = integrate_2d_semi_infinite(f, bound, spec, spec, InnerSide::Above);
    CHECK(below.value + above.value == doctest::Approx(1.0).epsilon(1e-8));
    const auto above_1d = integrate_semi_infinite([](double x1) { return std::exp(-x1 - 1.0 / x1); }, 0.0, spec);
    CHECK(above.value == doctest::Approx(above_1d.value).epsilon(1e-8));

    const double lb = 1e-5;
    const double lr = 5e-5;
    const auto rayleigh = [](double x, double lam) {
        return 2.0 * std::numbers::pi * lam * x * std::exp(-std::numbers::pi * lam * x * x);
    };
    QuadratureSpec scaled{.rel_tol = 1e-9, .abs_tol = 1e-13, .scale = 100.0};
    const auto mass =
        integrate_2d_semi_infinite([&](double x1, double x2) { return rayleigh(x1, lr) * rayleigh(x2, lb); }, unbounded, scaled);
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("vector integration matches component-wise scalar integration")
{
    const auto f = [](double x, std::span<double> out) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::exp(-(k + 1.0) * x) * x;
    };
    const auto v = integrate_semi_infinite_vec(f, 4, 0.0, {.rel_tol = 1e-10, .abs_tol = 1e-14});
    CHECK(v.converged);
    for (std::size_t k = 0; k < 4; ++k) CHECK(v.values[k] == doctest::Approx(1.0 / ((k + 1.0) * (k + 1.0))).epsilon(1e-9));
    const auto w = integrate_finite_vec(f, 2, 0.0, 1.0, {.rel_tol = 1e-12, .abs_tol = 1e-15});
    CHECK(w.values[0] == doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("repeated calls are bit-identical")
{
    const auto f = [](double x) { return std::log1p(x) / (1.0 + x * x); };
    const auto a = integrate_semi_infinite(f, 0.0);
    const auto b = integrate_semi_infinite(f, 0.0);
    CHECK(a.value == b.value);
    CHECK(a.est_error == b.est_error);
    CHECK(a.subdivisions_used == b.subdivisions_used);
}

TEST_CASE("spec validation and grids")
{
    CHECK_THROWS(QuadratureSpec{.rel_tol = 0.0}.validate());
    CHECK_THROWS(QuadratureSpec{.max_subdivisions = 0}.validate());
    const auto g = geometric_grid(1.0, 1000.0, 4);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 1000.0);
    CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-12));
}
