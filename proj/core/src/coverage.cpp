#include "riseval/coverage.hpp"

#include "riseval/association.hpp"
#include "riseval/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riseval::coverage {

namespace {

constexpr double pi = std::numbers::pi;
// Terms whose noise factor falls below this are dropped; each is bounded by
// C(m, n) times the factor.
constexpr double negligible_term = 1e-20;

// 1 - (1 + y)^-m without cancellation at small y.
double interferer_kernel(double y, int m) { return -std::expm1(-m * std::log1p(y)); }

std::vector<double> binomial_signs(int m)
{
    std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
    double binom = 1.0;
    for (int n = 1; n <= m; ++n) {
        binom = binom * (m - n + 1) / n;
        c[static_cast<std::size_t>(n)] = (n % 2 == 1 ? 1.0 : -1.0) * binom;
    }
    return c;
}

std::vector<double> sorted_unique_above(std::vector<double> points, double floor)
{
    std::erase_if(points, [floor](double p) { return !(p > floor) || !std::isfinite(p); });
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
                 points.end());
    return points;
}

// Finite pieces across the breakpoints above `lo`, then a semi-infinite tail.
quad::VectorOutcome integrate_radial(const quad::VectorIntegrand& f, std::size_t dim, double lo,
                                     std::vector<double> breaks, const quad::QuadratureSpec& base,
                                     quad::InfinityMap tail_map, double tail_scale)
{
    breaks = sorted_unique_above(std::move(breaks), lo);
    quad::VectorOutcome total;
    total.values.assign(dim, 0.0);
    total.converged = true;
    auto accumulate = [&](const quad::VectorOutcome& piece) {
        for (std::size_t k = 0; k < dim; ++k) total.values[k] += piece.values[k];
        total.est_error += piece.est_error;
        total.subdivisions_used += piece.subdivisions_used;
        total.converged = total.converged && piece.converged;
    };
    double left = lo;
    for (double b : breaks) {
        accumulate(quad::integrate_finite_vec(f, dim, left, b, base));
        left = b;
    }
    quad::QuadratureSpec tail = base;
    tail.infinity_map = tail_map;
    tail.scale = tail_scale;
    accumulate(quad::integrate_semi_infinite_vec(f, dim, left, tail));
    return total;
}

double integrate_scalar_pieces(const quad::Integrand& f, double lo, std::vector<double> breaks,
                               const quad::QuadratureSpec& spec, double tail_scale, double& est_error)
{
    const quad::VectorIntegrand lifted = [&f](double x, std::span<double> out) { out[0] = f(x); };
    const auto outcome = integrate_radial(lifted, 1, lo, std::move(breaks), spec, quad::InfinityMap::Exponential, tail_scale);
    if (!outcome.converged) {
        quad::QuadratureOutcome diag{outcome.values[0], outcome.est_error, outcome.subdivisions_used, false};
        throw quad::ConvergenceError("coverage: tier integral did not converge", diag);
    }
    est_error += outcome.est_error;
    return outcome.values[0];
}

struct Model {
    SystemParams p;
    DerivedParams d;
    association::PowerMatch match;
    CoverageOptions options;

    Model(const SystemParams& params, const CoverageOptions& opts)
        : p(params), d(derive(params)), match(association::PowerMatch::from(params, d.c_r_mean)), options(opts)
    {
    }
};

// Sum over n of c_n L_IL(s_n; d_min) L_IN(s_n) L_IR(s_n) e^(-s_n sigma^2), where
// s_n = n eta tau / (P_B gain). `ris_delta1` is zero for direct links.
double binomial_coverage(const Model& model, int m, double eta, double tau, double gain, double d_min,
                         double ris_delta1)
{
    const std::vector<double> c = binomial_signs(m);
    std::vector<double> s;
    std::vector<int> index;
    std::vector<double> log_terms;
    for (int n = 1; n <= m; ++n) {
        const double sn = n * eta * tau / (model.p.p_b * gain);
        const double noise = sn * model.d.sigma2;
        if (!(noise < -std::log(negligible_term))) continue;
        s.push_back(sn);
        index.push_back(n);
        double log_term = -noise;
        if (ris_delta1 > 0.0)
            log_term -= ris_delta1 * ris_interference_factor(n * eta * tau / model.p.m_r, model.p);
        log_terms.push_back(log_term);
    }
    if (s.empty()) return 0.0;
    const auto e_los = los_exponents(s, d_min, model.p, model.options);
    const auto e_nlos = nlos_exponents(s, model.p, model.options);
    double sum = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        sum += c[static_cast<std::size_t>(index[k])] * std::exp(log_terms[k] - e_los[k] - e_nlos[k]);
    return std::max(sum, 0.0);
}

double direct_conditional(const Model& model, channel::PathlossCase pc, double d, const ThresholdSet& thr)
{
    const auto eff = EffectiveThreshold::compute(thr.tau_t, thr.tau_c, model.p.a_s, model.p.a_l_pow);
    const auto tau = eff.for_case(pc);
    if (!tau) return 0.0;
    const double gain = channel::pathloss_direct(d, channel::LinkKind::DirectLoS, model.p);
    return binomial_coverage(model, model.p.m_l, model.d.eta_l, *tau, gain, d, 0.0);
}

double ris_conditional(const Model& model, channel::PathlossCase pc, const RisGeometry& g, const ThresholdSet& thr)
{
    const auto eff = EffectiveThreshold::compute(thr.tau_t, thr.tau_c, model.p.a_s, model.p.a_l_pow);
    const auto tau = eff.for_case(pc);
    if (!tau) return 0.0;
    const double gain = channel::pathloss_ris(g.d_br, g.d_ru, model.d.c_r_mean, model.p.alpha_r);
    const double delta1 = pi * model.d.lambda_b_active * g.d_br * g.d_br / 2.0;
    return binomial_coverage(model, model.p.m_r, model.d.eta_r, *tau, gain, model.match.phi(g.product()), delta1);
}

double los_tier(const Model& model, const ThresholdSet& thr, double& est_error)
{
    const auto& p = model.p;
    const double beta = p.beta_blockage;
    const double a = 2.0 * pi * std::sqrt(p.lambda_b * p.lambda_r);
    const double rayleigh = 1.0 / std::sqrt(pi * p.lambda_b);

    const auto integrand_for = [&](channel::PathlossCase pc) {
        return [&model, &thr, pc, &p](double x) {
            if (x <= 0.0) return 0.0;
            const double weight = association::pdf_nearest_los_bs(x, p) *
                                  association::survival_product_distance(model.match.phi_inverse(x), p.lambda_b, p.lambda_r);
            if (weight == 0.0) return 0.0;
            return weight * direct_conditional(model, pc, x, thr);
        };
    };

    std::vector<double> breaks;
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) breaks.push_back(k / beta);
    for (double k : {0.1, 0.25, 0.5, 1.0, 2.0, 4.0}) breaks.push_back(k * rayleigh);
    for (double k : {0.01, 0.1, 1.0, 3.0, 10.0, 30.0}) breaks.push_back(model.match.phi(k / a));

    std::vector<double> small_breaks;
    for (double b : breaks)
        if (b < p.d_c) small_breaks.push_back(b);
    small_breaks.push_back(p.d_c);

    double total = 0.0;
    // Small case on [0, d_C]: finite pieces only.
    {
        const quad::Integrand f = integrand_for(channel::PathlossCase::Small);
        small_breaks = sorted_unique_above(small_breaks, 0.0);
        double left = 0.0;
        for (double b : small_breaks) {
            const auto piece = quad::integrate_finite(f, left, b, model.options.outer);
            if (!piece.converged) throw quad::ConvergenceError("coverage: LoS small-case integral did not converge", piece);
            total += piece.value;
            est_error += piece.est_error;
            left = b;
        }
    }
    total += integrate_scalar_pieces(integrand_for(channel::PathlossCase::Large), p.d_c, breaks, model.options.outer,
                                     1.0 / beta, est_error);
    return total;
}

double ris_tier_reduced(const Model& model, const ThresholdSet& thr, double& est_error)
{
    const auto& p = model.p;
    const auto& d = model.d;
    const auto eff = EffectiveThreshold::compute(thr.tau_t, thr.tau_c, p.a_s, p.a_l_pow);
    const double z_c = model.match.phi_inverse(p.d_c);
    const int m = p.m_r;
    const std::vector<double> c = binomial_signs(m);

    // Per case and n: the BS-side density after folding in reflected
    // interference, lambda_B + lambda_active Q_n / 2.
    struct CaseData {
        std::optional<double> tau;
        std::vector<double> kernel_scale;  // 2 pi sqrt(lambda' lambda_R)
    };
    auto prepare = [&](channel::PathlossCase pc) {
        CaseData cd;
        cd.tau = eff.for_case(pc);
        if (cd.tau) {
            cd.kernel_scale.assign(static_cast<std::size_t>(m) + 1, 0.0);
            for (int n = 1; n <= m; ++n) {
                const double q = ris_interference_factor(n * d.eta_r * *cd.tau / m, p);
                cd.kernel_scale[static_cast<std::size_t>(n)] =
                    2.0 * pi * std::sqrt((p.lambda_b + d.lambda_b_active * q / 2.0) * p.lambda_r);
            }
        }
        return cd;
    };
    const CaseData small = prepare(channel::PathlossCase::Small);
    const CaseData large = prepare(channel::PathlossCase::Large);

    const auto integrand_for = [&](const CaseData& cd) {
        return [&](double z) {
            if (z <= 0.0 || !cd.tau) return 0.0;
            const double survival = association::survival_nearest_los_bs(model.match.phi(z), p);
            if (survival == 0.0) return 0.0;
            const double gain = d.c_r_mean * std::pow(z, -p.alpha_r);
            std::vector<double> s;
            std::vector<int> index;
            for (int n = 1; n <= m; ++n) {
                const double sn = n * d.eta_r * *cd.tau / (p.p_b * gain);
                if (sn * d.sigma2 < -std::log(negligible_term)) {
                    s.push_back(sn);
                    index.push_back(n);
                }
            }
            if (s.empty()) return 0.0;
            const auto e_los = los_exponents(s, model.match.phi(z), p, model.options);
            const auto e_nlos = nlos_exponents(s, p, model.options);
            double sum = 0.0;
            for (std::size_t k = 0; k < s.size(); ++k) {
                const auto n = static_cast<std::size_t>(index[k]);
                const double a_n = cd.kernel_scale[n];
                const double kernel = 4.0 * pi * pi * p.lambda_b * p.lambda_r * z * specfun::bessel_k0(a_n * z);
                sum += c[n] * kernel * std::exp(-s[k] * d.sigma2 - e_los[k] - e_nlos[k]);
            }
            return std::max(sum, 0.0) * survival;
        };
    };

    const double a_max = 2.0 * pi * std::sqrt((p.lambda_b + d.lambda_b_active * 1e3) * p.lambda_r);
    const double a_min = 2.0 * pi * std::sqrt(p.lambda_b * p.lambda_r);
    const double rayleigh = 1.0 / std::sqrt(pi * p.lambda_b);
    const double z_hi = 60.0 / a_min;
    double z_lo = std::min({1e-3 / a_max, model.match.phi_inverse(1e-2 * std::min(rayleigh, 1.0 / p.beta_blockage)), 1e-3 * z_c});
    z_lo = std::min(z_lo, 1e-3 * z_hi);
    const int count = std::clamp(static_cast<int>(std::ceil(std::log2(z_hi / z_lo))) + 1, 2, 400);
    const std::vector<double> grid = quad::geometric_grid(z_lo, z_hi, count);

    double total = 0.0;
    const auto run = [&](const CaseData& cd, double lo, double hi) {
        if (!cd.tau || !(hi > lo)) return;
        const quad::Integrand f = integrand_for(cd);
        std::vector<double> pts{lo};
        for (double g : grid)
            if (g > lo && g < hi) pts.push_back(g);
        if (std::isfinite(hi)) pts.push_back(hi);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const auto piece = quad::integrate_finite(f, pts[i], pts[i + 1], model.options.outer);
            if (!piece.converged) throw quad::ConvergenceError("coverage: RIS-tier integral did not converge", piece);
            total += piece.value;
            est_error += piece.est_error;
        }
        if (!std::isfinite(hi)) {
            quad::QuadratureSpec tail = model.options.outer;
            tail.infinity_map = quad::InfinityMap::Exponential;
            tail.scale = 1.0 / a_min;
            const auto piece = quad::integrate_semi_infinite(f, pts.back(), tail);
            if (!piece.converged) throw quad::ConvergenceError("coverage: RIS-tier tail did not converge", piece);
            total += piece.value;
            est_error += piece.est_error;
        }
    };
    run(small, 0.0, z_c);
    run(large, z_c, quad::infinity);
    return total;
}

double ris_tier_nested(const Model& model, const ThresholdSet& thr, double& est_error)
{
    const auto& p = model.p;
    const double z_c = model.match.phi_inverse(p.d_c);
    const auto integrand_for = [&](channel::PathlossCase pc) {
        return [&, pc](double x1, double x2) {
            if (x1 <= 0.0 || x2 <= 0.0) return 0.0;
            const double weight = association::pdf_nearest_rayleigh(x1, p.lambda_r) *
                                  association::pdf_nearest_rayleigh(x2, p.lambda_b) *
                                  association::survival_nearest_los_bs(model.match.phi(x1 * x2), p);
            if (weight == 0.0) return 0.0;
            return weight * ris_conditional(model, pc, RisGeometry{x2, x1}, thr);
        };
    };
    quad::QuadratureSpec outer = model.options.outer;
    outer.scale = 1.0 / std::sqrt(pi * p.lambda_r);
    quad::QuadratureSpec inner = model.options.outer;
    inner.scale = 1.0 / std::sqrt(pi * p.lambda_b);
    const auto bound = [z_c](double x1) { return x1 > 0.0 ? z_c / x1 : quad::infinity; };

    const auto small = quad::integrate_2d_semi_infinite(integrand_for(channel::PathlossCase::Small), bound, outer,
                                                        inner, quad::InnerSide::Below);
    const auto large = quad::integrate_2d_semi_infinite(integrand_for(channel::PathlossCase::Large), bound, outer,
                                                        inner, quad::InnerSide::Above);
    est_error += small.est_error + large.est_error;
    return small.value + large.value;
}

}  // namespace

ThresholdSet ThresholdSet::from(const SystemParams& params)
{
    return {params.tau_t, params.tau_c, params.rho_t, params.rho_c};
}

void ThresholdSet::validate() const
{
    if (!(tau_t > 0.0) || !(tau_c > 0.0) || !(rho_t > 0.0) || !(rho_c > 0.0))
        throw std::invalid_argument("ThresholdSet: thresholds must be positive");
}

EffectiveThreshold EffectiveThreshold::compute(double tau_t, double tau_c, double a_s, double a_l)
{
    EffectiveThreshold e;
    if (a_l - tau_c * a_s > 0.0) e.tau_star = std::max(tau_c / (a_l - tau_c * a_s), tau_t / a_s);
    if (a_l - tau_t * a_s > 0.0) e.tau_t_large = tau_t / (a_l - tau_t * a_s);
    return e;
}

std::optional<double> EffectiveThreshold::for_case(channel::PathlossCase c) const
{
    return c == channel::PathlossCase::Small ? tau_star : tau_t_large;
}

std::vector<double> los_exponents(std::span<const double> s, double d_min, const SystemParams& p,
                                  const CoverageOptions& options)
{
    const std::size_t dim = s.size();
    std::vector<double> out(dim, 0.0);
    const double beta = p.beta_blockage;
    if (dim == 0 || beta * d_min > 745.0) return out;
    const double lambda_active = active_bs_density(p.lambda_b, p.lambda_u);
    const int m = p.m_l;
    std::vector<double> coef(dim);
    std::vector<double> breaks{0.5 / beta, 2.0 / beta, 8.0 / beta};
    for (std::size_t k = 0; k < dim; ++k) {
        coef[k] = s[k] * p.p_b * p.c_l / m;
        if (coef[k] > 0.0) breaks.push_back(std::pow(coef[k], 1.0 / p.alpha_l));
    }
    const quad::VectorIntegrand f = [&](double x, std::span<double> v) {
        const double weight = x * std::exp(-beta * x);
        const double decay = std::pow(x, -p.alpha_l);
        for (std::size_t k = 0; k < dim; ++k) v[k] = interferer_kernel(coef[k] * decay, m) * weight;
    };
    const auto outcome = integrate_radial(f, dim, d_min, breaks, options.inner, quad::InfinityMap::Exponential, 1.0 / beta);
    if (!outcome.converged) {
        quad::QuadratureOutcome diag{outcome.values[0], outcome.est_error, outcome.subdivisions_used, false};
        throw quad::ConvergenceError("los_exponents: integral did not converge", diag);
    }
    for (std::size_t k = 0; k < dim; ++k) out[k] = 2.0 * pi * lambda_active * outcome.values[k];
    return out;
}

std::vector<double> nlos_exponents(std::span<const double> s, const SystemParams& p, const CoverageOptions& options)
{
    const std::size_t dim = s.size();
    std::vector<double> out(dim, 0.0);
    if (dim == 0) return out;
    const double beta = p.beta_blockage;
    const double lambda_active = active_bs_density(p.lambda_b, p.lambda_u);
    const int m = p.m_n;
    std::vector<double> coef(dim);
    std::vector<double> breaks{0.5 / beta, 2.0 / beta};
    double r_max = 1.0 / beta;
    for (std::size_t k = 0; k < dim; ++k) {
        coef[k] = s[k] * p.p_b * p.c_n / m;
        if (coef[k] > 0.0) {
            const double r = std::pow(coef[k], 1.0 / p.alpha_n);
            breaks.push_back(r);
            r_max = std::max(r_max, r);
        }
    }
    const quad::VectorIntegrand f = [&](double x, std::span<double> v) {
        const double weight = x * -std::expm1(-beta * x);
        const double decay = std::pow(x, -p.alpha_n);
        for (std::size_t k = 0; k < dim; ++k) v[k] = interferer_kernel(coef[k] * decay, m) * weight;
    };
    const auto outcome = integrate_radial(f, dim, 0.0, breaks, options.inner, quad::InfinityMap::Rational, r_max);
    if (!outcome.converged) {
        quad::QuadratureOutcome diag{outcome.values[0], outcome.est_error, outcome.subdivisions_used, false};
        throw quad::ConvergenceError("nlos_exponents: integral did not converge", diag);
    }
    for (std::size_t k = 0; k < dim; ++k) out[k] = 2.0 * pi * lambda_active * outcome.values[k];
    return out;
}

double laplace_los(double s, double d_min, const SystemParams& params, const CoverageOptions& options)
{
    if (s < 0.0 || d_min < 0.0) throw std::domain_error("laplace_los: require s >= 0, d_min >= 0");
    if (s == 0.0 || std::isinf(d_min)) return 1.0;
    const std::array<double, 1> arg{s};
    return std::exp(-los_exponents(arg, d_min, params, options)[0]);
}

double laplace_nlos(double s, const SystemParams& params, const CoverageOptions& options)
{
    if (s < 0.0) throw std::domain_error("laplace_nlos: require s >= 0");
    if (s == 0.0) return 1.0;
    const std::array<double, 1> arg{s};
    return std::exp(-nlos_exponents(arg, params, options)[0]);
}

double ris_interference_factor(double x, const SystemParams& params)
{
    if (x < 0.0) throw std::domain_error("ris_interference_factor: x must be non-negative");
    if (x == 0.0) return 0.0;
    const double b = -2.0 / params.alpha_r;
    return specfun::gauss_2f1_negz(params.m_r, b, 1.0 + b, -x) - 1.0;
}

double laplace_ris(double s, const RisGeometry& geom, const SystemParams& params)
{
    if (s < 0.0) throw std::domain_error("laplace_ris: require s >= 0");
    if (!(geom.d_br > 0.0) || !(geom.d_ru > 0.0)) throw std::domain_error("laplace_ris: distances must be positive");
    if (s == 0.0) return 1.0;
    const DerivedParams d = derive(params);
    const double delta1 = pi * d.lambda_b_active * geom.d_br * geom.d_br / 2.0;
    const double delta2 = params.p_b * channel::pathloss_ris(geom.d_br, geom.d_ru, d.c_r_mean, params.alpha_r) / params.m_r;
    return std::exp(-delta1 * ris_interference_factor(s * delta2, params));
}

double conditional_coverage(channel::LinkKind link, channel::PathlossCase pc, double distance,
                            const ThresholdSet& thresholds, const SystemParams& params, const CoverageOptions& options)
{
    if (!(distance > 0.0)) throw std::domain_error("conditional_coverage: distance must be positive");
    const Model model(params, options);
    switch (link) {
    case channel::LinkKind::DirectLoS:
        return direct_conditional(model, pc, distance, thresholds);
    case channel::LinkKind::RisReflected:
        // Only the product matters for the signal; split it evenly.
        return ris_conditional(model, pc, RisGeometry{std::sqrt(distance), std::sqrt(distance)}, thresholds);
    case channel::LinkKind::DirectNLoS:
        break;
    }
    throw std::invalid_argument("conditional_coverage: the typical UE is never served over an NLoS link");
}

double conditional_coverage(channel::PathlossCase pc, const RisGeometry& geom, const ThresholdSet& thresholds,
                            const SystemParams& params, const CoverageOptions& options)
{
    if (!(geom.d_br > 0.0) || !(geom.d_ru > 0.0)) throw std::domain_error("conditional_coverage: distances must be positive");
    const Model model(params, options);
    return ris_conditional(model, pc, geom, thresholds);
}

SinrCoverage sinr_coverage(const ThresholdSet& thresholds, const SystemParams& params, const CoverageOptions& options,
                           RisRoute route)
{
    thresholds.validate();
    const Model model(params, options);
    SinrCoverage out;
    out.los_tier = los_tier(model, thresholds, out.est_error);
    out.ris_tier = route == RisRoute::Reduced ? ris_tier_reduced(model, thresholds, out.est_error)
                                              : ris_tier_nested(model, thresholds, out.est_error);
    out.total = out.los_tier + out.ris_tier;
    return out;
}

double sinr_coverage_asymptotic(const ThresholdSet& thresholds, const SystemParams& params)
{
    thresholds.validate();
    const DerivedParams d = derive(params);
    const auto eff = EffectiveThreshold::compute(thresholds.tau_t, thresholds.tau_c, params.a_s, params.a_l_pow);
    if (!eff.tau_star) return 0.0;
    const std::vector<double> c = binomial_signs(params.m_r);
    double sum = 0.0;
    for (int n = 1; n <= params.m_r; ++n) {
        const double q = ris_interference_factor(n * d.eta_r * *eff.tau_star / params.m_r, params);
        sum += c[static_cast<std::size_t>(n)] * params.lambda_b / (d.lambda_b_active * q / 2.0 + params.lambda_b);
    }
    return sum;
}

double load_pmf(long n, const SystemParams& params)
{
    if (n < 1) throw std::domain_error("load_pmf: n must be >= 1");
    const double r = params.lambda_u / params.lambda_b;
    const double k = 3.5;
    const auto nd = static_cast<double>(n);
    double log_p = k * std::log(k) + specfun::log_gamma(nd + k) - specfun::log_gamma(k) - specfun::log_gamma(nd) -
                   (nd + k) * std::log(k + r);
    if (n > 1) log_p += (nd - 1.0) * std::log(r);
    return std::exp(log_p);
}

double rate_to_sinr(double rate, double bandwidth) { return std::expm1(rate * std::numbers::ln2 / bandwidth); }

RateCoverage rate_coverage(const ThresholdSet& thresholds, const SystemParams& params, RateMode mode,
                           const CoverageOptions& options)
{
    thresholds.validate();
    const DerivedParams d = derive(params);
    const auto thresholds_at = [&](double load) {
        ThresholdSet t = thresholds;
        t.tau_c = rate_to_sinr(load * thresholds.rho_c, params.bandwidth_w);
        t.tau_t = rate_to_sinr(load * thresholds.rho_t, params.bandwidth_w);
        return t;
    };
    RateCoverage out;
    if (mode == RateMode::MeanLoad) {
        const auto cov = sinr_coverage(thresholds_at(d.mean_load), params, options);
        out.value = cov.total;
        out.los_tier = cov.los_tier;
        out.ris_tier = cov.ris_tier;
        out.terms = 1;
        return out;
    }
    double cumulative = 0.0;
    long n = 0;
    while (1.0 - cumulative >= 1e-6) {
        ++n;
        if (n > 10'000'000) throw std::runtime_error("rate_coverage: load PMF tail did not vanish");
        const double weight = load_pmf(n, params);
        cumulative += weight;
        const ThresholdSet t = thresholds_at(static_cast<double>(n));
        const auto eff = EffectiveThreshold::compute(t.tau_t, t.tau_c, params.a_s, params.a_l_pow);
        if (weight == 0.0 || (!eff.tau_star && !eff.tau_t_large)) continue;
        const auto cov = sinr_coverage(t, params, options);
        out.los_tier += weight * cov.los_tier;
        out.ris_tier += weight * cov.ris_tier;
    }
    out.value = out.los_tier + out.ris_tier;
    out.terms = n;
    out.truncation_residual = std::max(0.0, 1.0 - cumulative);
    return out;
}

double rate_coverage_asymptotic(const ThresholdSet& thresholds, const SystemParams& params)
{
    thresholds.validate();
    const DerivedParams d = derive(params);
    ThresholdSet t = thresholds;
    t.tau_c = rate_to_sinr(d.mean_load * thresholds.rho_c, params.bandwidth_w);
    t.tau_t = rate_to_sinr(d.mean_load * thresholds.rho_t, params.bandwidth_w);
    return sinr_coverage_asymptotic(t, params);
}

}  // namespace riseval::coverage
