#include "riseval/association.hpp"

#include "riseval/channel.hpp"
#include "riseval/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace riseval::association {

namespace {

constexpr double pi = std::numbers::pi;

// 1 - e^(-t) (1 + t), accurate for small t.
double los_mass_kernel(double t)
{
    if (t < 0.5) {
        // sum_{k>=2} (-1)^k (k-1) t^k / k!
        double term = t * t / 2.0;  // t^k / k! at k = 2
        double sum = term;
        for (int k = 3; k < 30; ++k) {
            term *= t / k;
            const double add = (k % 2 == 0 ? 1.0 : -1.0) * (k - 1) * term;
            sum += add;
            if (std::abs(add) < 1e-17 * sum) break;
        }
        return sum;
    }
    return 1.0 - std::exp(-t) * (1.0 + t);
}

// P(no LoS BS within y) - P(no LoS BS at all), non-negative.
double los_deficit(double y, double lambda_b, double beta, BlockageModel model)
{
    if (model == BlockageModel::Unblocked) return std::exp(-pi * lambda_b * y * y);
    const double t = beta * y;
    const double inside = los_mass_kernel(t) / (beta * beta);
    const double outside = std::exp(-t) * (1.0 + t) / (beta * beta);
    return std::exp(-2.0 * pi * lambda_b * inside) * -std::expm1(-2.0 * pi * lambda_b * outside);
}

double product_scale(double lambda_b, double lambda_r) { return 2.0 * pi * std::sqrt(lambda_b * lambda_r); }

}  // namespace

double los_mass_within(double x, double beta, BlockageModel model)
{
    if (x < 0.0) throw std::domain_error("los_mass_within: x must be non-negative");
    if (model == BlockageModel::Unblocked) return 0.5 * x * x;
    return los_mass_kernel(beta * x) / (beta * beta);
}

double prob_los_exists(const SystemParams& params)
{
    const double beta = params.beta_blockage;
    return -std::expm1(-2.0 * pi * params.lambda_b / (beta * beta));
}

double survival_nearest_los_bs(double x, const SystemParams& params, BlockageModel model)
{
    return std::exp(-2.0 * pi * params.lambda_b * los_mass_within(x, params.beta_blockage, model));
}

double cdf_nearest_los_bs(double x, const SystemParams& params, BlockageModel model)
{
    return -std::expm1(-2.0 * pi * params.lambda_b * los_mass_within(x, params.beta_blockage, model));
}

double pdf_nearest_los_bs(double x, const SystemParams& params, BlockageModel model)
{
    if (x <= 0.0) return 0.0;
    const double p_los = model == BlockageModel::Unblocked ? 1.0 : channel::los_probability(x, params.beta_blockage);
    return 2.0 * pi * params.lambda_b * x * p_los * survival_nearest_los_bs(x, params, model);
}

double pdf_nearest_rayleigh(double x, double density)
{
    if (x <= 0.0) return 0.0;
    return 2.0 * pi * density * x * std::exp(-pi * density * x * x);
}

double cdf_nearest_rayleigh(double x, double density)
{
    if (x <= 0.0) return 0.0;
    return -std::expm1(-pi * density * x * x);
}

double pdf_product_distance(double z, double lambda_b, double lambda_r)
{
    if (z <= 0.0) return 0.0;
    const double a = product_scale(lambda_b, lambda_r);
    return a * a * z * specfun::bessel_k0(a * z);
}

double survival_product_distance(double z, double lambda_b, double lambda_r)
{
    if (z <= 0.0) return 1.0;
    const double az = product_scale(lambda_b, lambda_r) * z;
    return az * specfun::bessel_k1(az);
}

double DistanceDensity::pdf(double x) const
{
    switch (kind) {
    case DistanceKind::NearestLosBs: return pdf_nearest_los_bs(x, params, blockage);
    case DistanceKind::NearestBs: return pdf_nearest_rayleigh(x, params.lambda_b);
    case DistanceKind::NearestRis: return pdf_nearest_rayleigh(x, params.lambda_r);
    case DistanceKind::ProductBsRisUe: return pdf_product_distance(x, params.lambda_b, params.lambda_r);
    }
    return 0.0;
}

double DistanceDensity::cdf(double x) const
{
    switch (kind) {
    case DistanceKind::NearestLosBs: return cdf_nearest_los_bs(x, params, blockage);
    case DistanceKind::NearestBs: return cdf_nearest_rayleigh(x, params.lambda_b);
    case DistanceKind::NearestRis: return cdf_nearest_rayleigh(x, params.lambda_r);
    case DistanceKind::ProductBsRisUe: return 1.0 - survival_product_distance(x, params.lambda_b, params.lambda_r);
    }
    return 0.0;
}

double DistanceDensity::mass() const
{
    if (kind == DistanceKind::NearestLosBs && blockage == BlockageModel::Exponential) return prob_los_exists(params);
    return 1.0;
}

PowerMatch PowerMatch::from(const SystemParams& params, double c_r)
{
    return {std::pow(params.c_l / c_r, 1.0 / params.alpha_l), params.alpha_l, params.alpha_r};
}

double PowerMatch::phi(double x) const { return c_lr * std::pow(x, alpha_r / alpha_l); }

double PowerMatch::phi_inverse(double d) const { return std::pow(d / c_lr, alpha_l / alpha_r); }

AssociationReport assoc_prob_los(const SystemParams& params, const AssociationOptions& options)
{
    validate(params);
    const double c_r = channel::mean_ris_intercept(params.ris_half_length_l, params.epsilon0);
    const PowerMatch match = PowerMatch::from(params, c_r);
    const double beta = params.beta_blockage;
    const double lambda_b = params.lambda_b;
    const double lambda_r = params.lambda_r;

    const bool unblocked = options.blockage == BlockageModel::Unblocked;
    const double p_l = unblocked ? 1.0 : prob_los_exists(params);
    const double p_n = unblocked ? 0.0 : std::exp(-2.0 * pi * lambda_b / (beta * beta));

    // A_L = P_L - \int f_prod(x) [P(no LoS BS within phi(x)) - P_N] dx. The
    // bracket is non-negative, so the result sits strictly below P_L.
    const auto deficit = [&](double x) {
        if (x <= 0.0) return 0.0;
        return pdf_product_distance(x, lambda_b, lambda_r) * los_deficit(match.phi(x), lambda_b, beta, options.blockage);
    };

    const double a = product_scale(lambda_b, lambda_r);
    const double x_max = 45.0 / a;
    const double los_scale = unblocked ? 1.0 / std::sqrt(pi * lambda_b) : std::min(1.0 / beta, 1.0 / std::sqrt(pi * lambda_b));
    const double x_lo = std::min({match.phi_inverse(1e-2 * los_scale), 1e-3 / a, 0.5 * x_max});
    const int count = std::clamp(static_cast<int>(std::ceil(std::log2(x_max / x_lo))) + 1, 2, 200);
    std::vector<double> breaks = quad::geometric_grid(x_lo, x_max, count);
    breaks.insert(breaks.begin(), 0.0);

    const auto outcome = quad::integrate_with_breakpoints(deficit, breaks, false, options.spec);
    if (!outcome.converged) throw quad::ConvergenceError("assoc_prob_los: deficit integral did not converge", outcome);

    AssociationReport report;
    report.a_l = p_l - outcome.value;
    report.a_r = 1.0 - report.a_l;
    report.upper_bound_pl = p_l;
    report.lower_bound_pn = p_n;
    // Mass beyond x_max is bounded by the product-distance survival there.
    report.est_error = outcome.est_error + (p_l - p_n) * survival_product_distance(x_max, lambda_b, lambda_r);
    report.subdivisions = outcome.subdivisions_used;
    return report;
}

double assoc_prob_closed_double(double c_lr, double ratio_rb)
{
    if (!(c_lr > 0.0) || !(ratio_rb > 0.0)) throw std::domain_error("assoc_prob_closed_double: arguments must be positive");
    const double c2 = c_lr * c_lr;
    const double gap = c2 * c2 - 4.0 * ratio_rb;
    if (!(gap > 0.0)) throw AssociationBranchError("assoc_prob_closed_double: c_lr^4 - 4 lambda_rb <= 0 has no real closed form");
    const double root = std::sqrt(gap);
    // ln(u + sqrt(u^2 - 1)) with u = c^2 / (2 sqrt(lambda_rb)).
    const double log_term = std::acosh(c2 / (2.0 * std::sqrt(ratio_rb)));
    return 1.0 - 4.0 * ratio_rb / gap * (c2 / root * log_term - 1.0);
}

double assoc_prob_closed_equal(double c_lr, double lambda_r)
{
    if (!(c_lr > 0.0) || !(lambda_r > 0.0)) throw std::domain_error("assoc_prob_closed_equal: arguments must be positive");
    const double z = pi * lambda_r / (c_lr * c_lr);
    // sqrt(z) e^(z/2) W(z) = z e^z E1(z); the scaled route avoids overflow.
    if (z > 500.0) return 1.0 - z * specfun::exp_integral_e1_scaled(z);
    return 1.0 - std::sqrt(z) * std::exp(0.5 * z) * specfun::whittaker_w_mhalf_zero(z);
}

}  // namespace riseval::association
