#pragma once

// Deterministic adaptive Gauss-Kronrod (G10/K21) integration.
//
// The same node tables and bisection order are used on every call, so a
// given integrand always produces bit-identical results.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace riseval::quad {

enum class InfinityMap {
    Rational,     // x = a + scale * t / (1 - t); power-law tails
    Exponential,  // x = a - scale * ln(1 - t); exponentially damped tails
};

struct QuadratureSpec {
    double rel_tol = 1e-7;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    InfinityMap infinity_map = InfinityMap::Rational;
    // Characteristic length of the semi-infinite map. Leaving it at 1 is
    // correct but slow for integrands living on scales far from unity.
    double scale = 1.0;

    void validate() const;
};

struct QuadratureOutcome {
    double value = 0.0;
    double est_error = 0.0;
    int subdivisions_used = 0;
    bool converged = false;
};

/// Integrand returned a NaN or infinity at an interior abscissa.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double abscissa)
        : std::runtime_error(what), abscissa_(abscissa) {}
    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

/// A required integral did not meet its tolerance. Carries the best estimate.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, const QuadratureOutcome& outcome)
        : std::runtime_error(what), outcome_(outcome) {}
    const QuadratureOutcome& outcome() const noexcept { return outcome_; }

private:
    QuadratureOutcome outcome_;
};

using Integrand = std::function<double(double)>;
using Integrand2D = std::function<double(double, double)>;
// Writes `out.size()` component values at x.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

QuadratureOutcome integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

/// \int_a^\infty f(x) dx via the spec's change of variables onto [0, 1).
QuadratureOutcome integrate_semi_infinite(const Integrand& f, double a, const QuadratureSpec& spec = {});

/// Sum of finite pieces between consecutive breakpoints plus a semi-infinite
/// tail from the last one. Breakpoints must be non-decreasing.
QuadratureOutcome integrate_with_breakpoints(const Integrand& f, std::span<const double> breakpoints,
                                             bool semi_infinite_tail, const QuadratureSpec& spec = {});

enum class InnerSide {
    Below,  // inner variable runs over [0, bound(x1)]
    Above,  // inner variable runs over [bound(x1), infinity)
};

/// Nested \int_0^\infty dx1 \int f(x1, x2) dx2 where the inner range is cut
/// at `inner_bound(x1)` (which may return +infinity). The outer tolerance is
/// inflated by the worst inner relative error observed.
QuadratureOutcome integrate_2d_semi_infinite(const Integrand2D& f, const std::function<double(double)>& inner_bound,
                                             const QuadratureSpec& outer_spec, const QuadratureSpec& inner_spec,
                                             InnerSide side = InnerSide::Below);

inline QuadratureOutcome integrate_2d_semi_infinite(const Integrand2D& f,
                                                    const std::function<double(double)>& inner_bound,
                                                    const QuadratureSpec& spec = {},
                                                    InnerSide side = InnerSide::Below)
{
    return integrate_2d_semi_infinite(f, inner_bound, spec, spec, side);
}

struct VectorOutcome {
    std::vector<double> values;
    double est_error = 0.0;  // largest per-component error estimate
    int subdivisions_used = 0;
    bool converged = false;
};

/// Integrates several integrands on one shared adaptive grid. Refinement
/// continues until every component meets the tolerance.
VectorOutcome integrate_finite_vec(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                   const QuadratureSpec& spec = {});
VectorOutcome integrate_semi_infinite_vec(const VectorIntegrand& f, std::size_t dim, double a,
                                          const QuadratureSpec& spec = {});

/// `count` points geometrically spaced from lo to hi inclusive (lo > 0).
std::vector<double> geometric_grid(double lo, double hi, int count);

inline constexpr double infinity = std::numeric_limits<double>::infinity();

}  // namespace riseval::quad
