#pragma once

// Distance distributions and tier association probabilities.

#include "riseval/config.hpp"
#include "riseval/quadrature.hpp"

#include <stdexcept>

namespace riseval::association {

enum class BlockageModel {
    Exponential,  // p_L(d) = e^(-beta d)
    Unblocked,    // p_L(d) = 1; the setting of the closed-form special cases
};

enum class DistanceKind {
    NearestLosBs,    // improper: total mass P_L
    NearestBs,       // Rayleigh with density lambda_B
    NearestRis,      // Rayleigh with density lambda_R
    ProductBsRisUe,  // d_BR * d_RU
};

/// \int_0^x r p_L(r) dr.
double los_mass_within(double x, double beta, BlockageModel model = BlockageModel::Exponential);

/// P(at least one LoS BS) = 1 - exp(-2 pi lambda_B / beta^2).
double prob_los_exists(const SystemParams& params);

/// exp(-2 pi lambda_B \int_0^x r p_L(r) dr): no LoS BS within x.
double survival_nearest_los_bs(double x, const SystemParams& params,
                               BlockageModel model = BlockageModel::Exponential);
double cdf_nearest_los_bs(double x, const SystemParams& params, BlockageModel model = BlockageModel::Exponential);
double pdf_nearest_los_bs(double x, const SystemParams& params, BlockageModel model = BlockageModel::Exponential);

/// Nearest point of a homogeneous PPP with the given density.
double pdf_nearest_rayleigh(double x, double density);
double cdf_nearest_rayleigh(double x, double density);

/// Density of d_BR d_RU: 4 pi^2 z lambda_B lambda_R K0(2 pi z sqrt(lambda_B lambda_R)).
double pdf_product_distance(double z, double lambda_b, double lambda_r);
/// P(d_BR d_RU > z) = a z K1(a z), a = 2 pi sqrt(lambda_B lambda_R).
double survival_product_distance(double z, double lambda_b, double lambda_r);

struct DistanceDensity {
    DistanceKind kind = DistanceKind::NearestBs;
    SystemParams params;
    BlockageModel blockage = BlockageModel::Exponential;

    double pdf(double x) const;
    double cdf(double x) const;
    /// Total probability mass; below 1 only for NearestLosBs.
    double mass() const;
};

/// phi(x) = (C_L / C_R)^(1/alpha_L) x^(alpha_R / alpha_L): the LoS distance
/// giving the same average power as a reflected path of product distance x.
struct PowerMatch {
    double c_lr = 1.0;  // (C_L / C_R)^(1/alpha_L)
    double alpha_l = 2.0;
    double alpha_r = 2.8;

    static PowerMatch from(const SystemParams& params, double c_r);
    double phi(double x) const;
    double phi_inverse(double d) const;
};

struct AssociationReport {
    double a_l = 0.0;
    double a_r = 0.0;
    double upper_bound_pl = 0.0;
    double lower_bound_pn = 0.0;
    double est_error = 0.0;
    int subdivisions = 0;
};

struct AssociationOptions {
    BlockageModel blockage = BlockageModel::Exponential;
    quad::QuadratureSpec spec{.rel_tol = 1e-10, .abs_tol = 1e-14, .max_subdivisions = 4000};
};

/// LoS-tier association probability, with A_R = 1 - A_L and the P_L / P_N
/// bounds attached. Throws quad::ConvergenceError if the integral misses its
/// tolerance.
AssociationReport assoc_prob_los(const SystemParams& params, const AssociationOptions& options = {});

/// The closed form has no real value on this branch.
class AssociationBranchError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// p_L = 1 and alpha_L = 2 alpha_R. `c_lr` is (C_L/C_R)^(1/alpha_L) and
/// `ratio_rb` is lambda_R / lambda_B; requires c_lr^4 > 4 ratio_rb.
double assoc_prob_closed_double(double c_lr, double ratio_rb);

/// p_L = 1 and alpha_L = alpha_R.
double assoc_prob_closed_equal(double c_lr, double lambda_r);

}  // namespace riseval::association
