#pragma once

// Interference Laplace transforms, SINR coverage, and load-aware rate
// coverage of the typical UE.
//
// Conditional coverage uses the gamma-CDF lower bound
// P(h^2 < x) > (1 - e^(-eta x))^m, so every conditional term is the
// alternating binomial sum over n = 1..m with s_n = n eta tau / (P_B g).

#include "riseval/channel.hpp"
#include "riseval/config.hpp"
#include "riseval/quadrature.hpp"

#include <optional>
#include <span>
#include <vector>

namespace riseval::coverage {

struct ThresholdSet {
    double tau_t = 0.01;
    double tau_c = 0.01;
    double rho_t = 1e6;
    double rho_c = 1e6;

    static ThresholdSet from(const SystemParams& params);
    void validate() const;
};

/// tau_star covers the small path-loss case (SIC then own decode);
/// tau_t_large covers the large case. Empty when the split is infeasible.
struct EffectiveThreshold {
    std::optional<double> tau_star;
    std::optional<double> tau_t_large;

    static EffectiveThreshold compute(double tau_t, double tau_c, double a_s, double a_l);
    std::optional<double> for_case(channel::PathlossCase c) const;
};

struct RisGeometry {
    double d_br = 1.0;  // serving BS to RIS
    double d_ru = 1.0;  // RIS to typical UE
    double product() const { return d_br * d_ru; }
};

struct CoverageOptions {
    quad::QuadratureSpec inner{.rel_tol = 1e-9, .abs_tol = 1e-15, .max_subdivisions = 400};
    quad::QuadratureSpec outer{.rel_tol = 1e-7, .abs_tol = 1e-12, .max_subdivisions = 2000};
};

/// exp of minus the LoS-interferer exponent, interferers beyond d_min.
double laplace_los(double s, double d_min, const SystemParams& params, const CoverageOptions& options = {});
/// NLoS interferers from distance 0.
double laplace_nlos(double s, const SystemParams& params, const CoverageOptions& options = {});
/// Reflected interference through the serving RIS (closed form in 2F1).
double laplace_ris(double s, const RisGeometry& geom, const SystemParams& params);

/// Exponents -ln L(s_k) for several s_k on one shared adaptive grid.
std::vector<double> los_exponents(std::span<const double> s, double d_min, const SystemParams& params,
                                  const CoverageOptions& options = {});
std::vector<double> nlos_exponents(std::span<const double> s, const SystemParams& params,
                                   const CoverageOptions& options = {});

/// 2F1(m_R, -2/alpha_R; 1 - 2/alpha_R; -x) - 1, the reflected-interference
/// factor at normalized load x = s P_B L_RIS / m_R.
double ris_interference_factor(double x, const SystemParams& params);

/// Coverage given the serving link. `distance` is d_0j for direct links;
/// the RIS overload takes the two hop lengths. Returns exactly 0 when the
/// threshold split is infeasible for the requested case.
double conditional_coverage(channel::LinkKind link, channel::PathlossCase pathloss_case, double distance,
                            const ThresholdSet& thresholds, const SystemParams& params,
                            const CoverageOptions& options = {});
double conditional_coverage(channel::PathlossCase pathloss_case, const RisGeometry& geom,
                            const ThresholdSet& thresholds, const SystemParams& params,
                            const CoverageOptions& options = {});

enum class RisRoute {
    // Exact reduction to one integral over the product distance; the 2F1
    // factor does not depend on geometry, so the d_BR integral is Gaussian.
    Reduced,
    // Nested integral over (d_RU, d_BR) with the case split at phi^-1(d_C)/d_RU.
    Nested,
};

struct SinrCoverage {
    double total = 0.0;
    double los_tier = 0.0;
    double ris_tier = 0.0;
    double est_error = 0.0;
};

SinrCoverage sinr_coverage(const ThresholdSet& thresholds, const SystemParams& params,
                           const CoverageOptions& options = {}, RisRoute route = RisRoute::Reduced);

/// Limit of the SINR coverage as the RIS half-length grows without bound.
double sinr_coverage_asymptotic(const ThresholdSet& thresholds, const SystemParams& params);

/// P(N_B = n), computed in log space.
double load_pmf(long n, const SystemParams& params);

/// 2^(rate / W) - 1.
double rate_to_sinr(double rate, double bandwidth);

enum class RateMode { ExactSum, MeanLoad };

struct RateCoverage {
    double value = 0.0;
    double los_tier = 0.0;
    double ris_tier = 0.0;
    long terms = 0;                  // load values summed (1 for MeanLoad)
    double truncation_residual = 0;  // PMF mass left out of the sum
};

RateCoverage rate_coverage(const ThresholdSet& thresholds, const SystemParams& params, RateMode mode,
                           const CoverageOptions& options = {});

double rate_coverage_asymptotic(const ThresholdSet& thresholds, const SystemParams& params);

}  // namespace riseval::coverage
