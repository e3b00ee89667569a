#include "riseval/montecarlo.hpp"

#include "riseval/association.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace riseval::mc {

namespace {

constexpr double pi = std::numbers::pi;

enum StreamTag : std::uint64_t {
    kBsPoints = 1,
    kMarks = 2,
    kRis = 3,
    kDirectFading = 4,
    kRisFading = 5,
    kLoad = 6,
    kIntercept = 7,
    kLaplacePoints = 8,
    kLaplaceMarks = 9,
    kLaplaceFading = 10,
};

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v)
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct Moments {
    CompensatedSum sum;
    CompensatedSum sum_sq;
    long n = 0;

    void add(double v)
    {
        sum.add(v);
        sum_sq.add(v * v);
        ++n;
    }
    void merge(const Moments& o)
    {
        sum.add(o.sum.value());
        sum_sq.add(o.sum_sq.value());
        n += o.n;
    }
};

CoverageResult finish(const Moments& m)
{
    CoverageResult r;
    r.engine = Engine::MonteCarlo;
    r.samples = m.n;
    if (m.n == 0) throw std::invalid_argument("empty estimate");
    const double n = static_cast<double>(m.n);
    r.estimate = m.sum.value() / n;
    if (m.n > 1) {
        const double var = std::max(0.0, (m.sum_sq.value() - n * r.estimate * r.estimate) / (n - 1.0));
        r.std_error = std::sqrt(var / n);
    }
    return r;
}

constexpr long chunk_size = 2048;

// Runs body(begin, end, chunk) over fixed chunks of [0, n). Chunk boundaries
// do not depend on `jobs`, so results merged in chunk order are identical for
// any thread count.
template <class Body>
void for_each_chunk(long n, int jobs, Body&& body)
{
    const long chunks = (n + chunk_size - 1) / chunk_size;
    const auto run_chunk = [&](long c) { body(c * chunk_size, std::min(n, (c + 1) * chunk_size), c); };
    if (jobs <= 1 || chunks <= 1) {
        for (long c = 0; c < chunks; ++c) run_chunk(c);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> workers;
    const int count = static_cast<int>(std::min<long>(jobs, chunks));
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (int w = 0; w < count; ++w) {
        workers.emplace_back([&] {
            try {
                for (long c = next++; c < chunks && !failed; c = next++) run_chunk(c);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

template <class PerRealization>
CoverageResult mean_over_realizations(const MCConfig& cfg, PerRealization&& value_of)
{
    if (cfg.n_realizations <= 0) throw std::invalid_argument("empty estimate");
    const long chunks = (cfg.n_realizations + chunk_size - 1) / chunk_size;
    std::vector<Moments> parts(static_cast<std::size_t>(chunks));
    for_each_chunk(cfg.n_realizations, cfg.jobs, [&](long begin, long end, long c) {
        Moments m;
        for (long i = begin; i < end; ++i) m.add(value_of(i));
        parts[static_cast<std::size_t>(c)] = m;
    });
    Moments total;
    for (const auto& p : parts) total.merge(p);
    return finish(total);
}

Point uniform_in_disc(channel::RngStream& rng, double radius)
{
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * pi * rng.uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double direct_gain(const BsPoint& bs, const SystemParams& p)
{
    return bs.los ? p.c_l * std::pow(bs.dist, -p.alpha_l) : p.c_n * std::pow(bs.dist, -p.alpha_n);
}

long draw_load(channel::RngStream& rng, double ratio)
{
    if (!(ratio > 0.0)) return 1;
    // 1 + NegBin(4.5, 3.5 / (3.5 + ratio)) as a gamma-Poisson mixture.
    std::gamma_distribution<double> gamma(4.5, ratio / 3.5);
    const double rate = gamma(rng);
    return 1 + rng.poisson(rate);
}

}  // namespace

const char* scheme_name(Scheme scheme)
{
    switch (scheme) {
    case Scheme::NomaRisHetNet: return "NomaRisHetNet";
    case Scheme::OmaRisHetNet: return "OmaRisHetNet";
    case Scheme::NomaMacroOnly: return "NomaMacroOnly";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name)
{
    for (Scheme s : {Scheme::NomaRisHetNet, Scheme::OmaRisHetNet, Scheme::NomaMacroOnly})
        if (name == scheme_name(s)) return s;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

double minimum_region_radius(const SystemParams& p)
{
    return std::max({10.0 / p.beta_blockage, 5.0 / std::sqrt(pi * p.lambda_b), 5.0 / std::sqrt(pi * p.lambda_r)});
}

double auto_region_radius(const SystemParams& p) { return 2.0 * minimum_region_radius(p); }

void MCConfig::validate(const SystemParams& params) const
{
    riseval::validate(params);
    if (n_realizations < 0) throw std::invalid_argument("MCConfig: n_realizations must be non-negative");
    if (jobs < 1) throw std::invalid_argument("MCConfig: jobs must be >= 1");
    if (region_radius != 0.0 && region_radius < minimum_region_radius(params))
        throw std::invalid_argument("MCConfig: region_radius below max(10/beta, 5/sqrt(pi lambda_B), 5/sqrt(pi lambda_R))");
}

double Point::norm() const { return std::hypot(x, y); }

NetworkRealization sample_realization(const MCConfig& cfg, const SystemParams& p, long index, bool draw_fading)
{
    NetworkRealization r;
    r.radius = cfg.region_radius > 0.0 ? cfg.region_radius : auto_region_radius(p);
    const auto idx = static_cast<std::uint64_t>(index);
    const double area = pi * r.radius * r.radius;

    channel::RngStream points(cfg.seed, idx, kBsPoints);
    channel::RngStream marks(cfg.seed, idx, kMarks);
    const long n_bs = points.poisson(p.lambda_b * area);
    const double active_prob = active_bs_density(p.lambda_b, p.lambda_u) / p.lambda_b;
    r.bs_points.reserve(static_cast<std::size_t>(n_bs));
    for (long k = 0; k < n_bs; ++k) {
        BsPoint bs;
        bs.pos = uniform_in_disc(points, r.radius);
        bs.dist = bs.pos.norm();
        bs.los = marks.uniform() < channel::los_probability(bs.dist, p.beta_blockage);
        bs.active = marks.uniform() < active_prob;
        r.bs_points.push_back(bs);
    }

    channel::RngStream ris(cfg.seed, idx, kRis);
    const long n_ris = ris.poisson(p.lambda_r * area);
    if (n_ris > 0) {
        // Minimum of n uniform area fractions: 1 - V^(1/n).
        const double fraction = -std::expm1(std::log(ris.uniform_pos()) / static_cast<double>(n_ris));
        const double rr = r.radius * std::sqrt(fraction);
        const double theta = 2.0 * pi * ris.uniform();
        r.ris_points.push_back({rr * std::cos(theta), rr * std::sin(theta)});
    }

    if (cfg.instantaneous_cr) {
        channel::RngStream angle(cfg.seed, idx, kIntercept);
        r.c_r = channel::instantaneous_ris_intercept(p.ris_half_length_l,
                                                     channel::split_angle(pi * angle.uniform(), p.epsilon0));
    } else {
        r.c_r = channel::mean_ris_intercept(p.ris_half_length_l, p.epsilon0);
    }

    if (draw_fading) {
        channel::RngStream direct(cfg.seed, idx, kDirectFading);
        channel::RngStream reflected(cfg.seed, idx, kRisFading);
        r.direct_fading.resize(r.bs_points.size());
        r.ris_fading.resize(r.bs_points.size());
        for (std::size_t k = 0; k < r.bs_points.size(); ++k) {
            r.direct_fading[k] = channel::sample_nakagami_power(r.bs_points[k].los ? p.m_l : p.m_n, direct);
            r.ris_fading[k] = channel::sample_nakagami_power(p.m_r, reflected);
        }
        channel::RngStream load(cfg.seed, idx, kLoad);
        r.load = draw_load(load, p.lambda_u / p.lambda_b);
    }
    return r;
}

long nearest_bs(const NetworkRealization& r, const Point& p)
{
    long best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.bs_points.size(); ++k) {
        const double d = distance(r.bs_points[k].pos, p);
        if (d < best_d) {
            best_d = d;
            best = static_cast<long>(k);
        }
    }
    return best;
}

ServingChoice associate(const NetworkRealization& r, const SystemParams& p, Scheme scheme)
{
    ServingChoice choice;
    long los_index = -1;
    double los_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.bs_points.size(); ++k) {
        const auto& bs = r.bs_points[k];
        if (bs.los && bs.dist < los_d) {
            los_d = bs.dist;
            los_index = static_cast<long>(k);
        }
    }
    const double los_power = los_index >= 0 ? p.c_l * std::pow(los_d, -p.alpha_l) : 0.0;

    double ris_power = 0.0;
    long ris_bs = -1;
    if (scheme != Scheme::NomaMacroOnly && !r.ris_points.empty()) {
        ris_bs = nearest_bs(r, r.ris_points.front());
        if (ris_bs >= 0) {
            const double d_br = distance(r.bs_points[static_cast<std::size_t>(ris_bs)].pos, r.ris_points.front());
            const double d_ru = r.ris_points.front().norm();
            ris_power = r.c_r * std::pow(d_br * d_ru, -p.alpha_r);
        }
    }

    if (los_index >= 0 && los_power >= ris_power) {
        choice.kind = ServingKind::LosBs;
        choice.bs_index = los_index;
    } else if (ris_bs >= 0) {
        choice.kind = ServingKind::Ris;
        choice.bs_index = ris_bs;
        choice.ris_index = 0;
    }
    return choice;
}

LinkSample link_sample(const NetworkRealization& r, const ServingChoice& choice, const SystemParams& p)
{
    LinkSample out;
    out.kind = choice.kind;
    out.load = r.load;
    if (choice.kind == ServingKind::None) return out;
    if (r.direct_fading.size() != r.bs_points.size())
        throw std::invalid_argument("link_sample: realization was sampled without fading");

    const auto j = static_cast<std::size_t>(choice.bs_index);
    double interference = 0.0;
    for (std::size_t k = 0; k < r.bs_points.size(); ++k) {
        if (k == j || !r.bs_points[k].active) continue;
        interference += direct_gain(r.bs_points[k], p) * r.direct_fading[k];
    }

    if (choice.kind == ServingKind::LosBs) {
        const auto& bs = r.bs_points[j];
        out.signal = p.c_l * std::pow(bs.dist, -p.alpha_l) * r.direct_fading[j];
        out.pathloss_case = bs.dist <= p.d_c ? channel::PathlossCase::Small : channel::PathlossCase::Large;
        out.interference = interference;
        return out;
    }

    const Point& ris = r.ris_points.at(static_cast<std::size_t>(choice.ris_index));
    const Point& serving = r.bs_points[j].pos;
    const double d_ru = ris.norm();
    const double d_br = distance(serving, ris);
    const double z = d_br * d_ru;
    out.signal = r.c_r * std::pow(z, -p.alpha_r) * r.ris_fading[j];
    const auto match = association::PowerMatch::from(p, r.c_r);
    out.pathloss_case = z <= match.phi_inverse(p.d_c) ? channel::PathlossCase::Small : channel::PathlossCase::Large;

    // Reflecting side: the half-plane through the RIS containing both the UE
    // and the serving BS, with its normal along the bisector of the two.
    double nx = -ris.x / d_ru + (serving.x - ris.x) / d_br;
    double ny = -ris.y / d_ru + (serving.y - ris.y) / d_br;
    if (std::hypot(nx, ny) < 1e-12) {
        nx = -ris.x;
        ny = -ris.y;
    }
    for (std::size_t k = 0; k < r.bs_points.size(); ++k) {
        if (k == j || !r.bs_points[k].active) continue;
        const Point& q = r.bs_points[k].pos;
        const double dx = q.x - ris.x;
        const double dy = q.y - ris.y;
        if (dx * nx + dy * ny <= 0.0) continue;
        const double d = std::hypot(dx, dy);
        if (d <= d_br) continue;
        interference += r.c_r * std::pow(d * d_ru, -p.alpha_r) * r.ris_fading[k];
    }
    out.interference = interference;
    return out;
}

SinrOutcome sinr_outcome(const LinkSample& link, double p_b, double sigma2, const SystemParams& p, double tau_t,
                         double tau_c, Scheme scheme)
{
    SinrOutcome o;
    o.pathloss_case = link.pathloss_case;
    if (link.kind == ServingKind::None) return o;
    const double floor = link.interference + sigma2 / p_b;
    if (scheme == Scheme::OmaRisHetNet) {
        o.sinr_t = link.signal / floor;
        o.covered = o.sinr_t > tau_t;
        return o;
    }
    if (link.pathloss_case == channel::PathlossCase::Small) {
        o.sinr_sic = p.a_l_pow * link.signal / (p.a_s * link.signal + floor);
        o.sinr_t = p.a_s * link.signal / floor;
        o.sic_ok = o.sinr_sic > tau_c;
        o.covered = o.sic_ok && o.sinr_t > tau_t;
    } else {
        o.sinr_t = p.a_l_pow * link.signal / (p.a_s * link.signal + floor);
        o.covered = o.sinr_t > tau_t;
    }
    return o;
}

SinrOutcome evaluate_sinr(const NetworkRealization& r, const ServingChoice& choice, const SystemParams& params,
                          const coverage::ThresholdSet& thresholds, Scheme scheme)
{
    const LinkSample link = link_sample(r, choice, params);
    return sinr_outcome(link, params.p_b, noise_power_watts(params.bandwidth_w, params.noise_figure_nf), params,
                        thresholds.tau_t, thresholds.tau_c, scheme);
}

std::vector<LinkSample> simulate_links(const MCConfig& cfg, const SystemParams& params)
{
    cfg.validate(params);
    std::vector<LinkSample> links(static_cast<std::size_t>(cfg.n_realizations));
    for_each_chunk(cfg.n_realizations, cfg.jobs, [&](long begin, long end, long) {
        for (long i = begin; i < end; ++i) {
            const auto r = sample_realization(cfg, params, i, true);
            links[static_cast<std::size_t>(i)] = link_sample(r, associate(r, params, cfg.scheme), params);
        }
    });
    return links;
}

CoverageResult coverage_from_links(std::span<const LinkSample> links, const SystemParams& params,
                                   const coverage::ThresholdSet& thresholds, Scheme scheme, Metric metric)
{
    if (links.empty()) throw std::invalid_argument("empty estimate");
    const double sigma2 = noise_power_watts(params.bandwidth_w, params.noise_figure_nf);
    long covered = 0;
    for (const auto& link : links) {
        double tau_t = thresholds.tau_t;
        double tau_c = thresholds.tau_c;
        if (metric == Metric::Rate) {
            const auto load = static_cast<double>(link.load);
            // OMA halves the per-UE resource; NOMA shares it among the load.
            const double share = scheme == Scheme::OmaRisHetNet ? 2.0 * load : load;
            tau_t = coverage::rate_to_sinr(share * thresholds.rho_t, params.bandwidth_w);
            tau_c = coverage::rate_to_sinr(share * thresholds.rho_c, params.bandwidth_w);
        }
        if (sinr_outcome(link, params.p_b, sigma2, params, tau_t, tau_c, scheme).covered) ++covered;
    }
    CoverageResult r;
    r.engine = Engine::MonteCarlo;
    r.samples = static_cast<long>(links.size());
    const double n = static_cast<double>(links.size());
    r.estimate = static_cast<double>(covered) / n;
    r.std_error = n > 1 ? std::sqrt(r.estimate * (1.0 - r.estimate) / (n - 1.0)) : 0.0;
    return r;
}

CoverageResult estimate(const MCConfig& cfg, const SystemParams& params, const Target& target)
{
    cfg.validate(params);
    if (cfg.n_realizations == 0) throw std::invalid_argument("empty estimate");

    if (std::holds_alternative<AssocProb>(target)) {
        return mean_over_realizations(cfg, [&](long i) {
            const auto r = sample_realization(cfg, params, i, false);
            return associate(r, params, cfg.scheme).kind == ServingKind::LosBs ? 1.0 : 0.0;
        });
    }
    if (const auto* t = std::get_if<SinrCoverage>(&target)) {
        const auto links = simulate_links(cfg, params);
        return coverage_from_links(links, params, t->thresholds, cfg.scheme, Metric::Sinr);
    }
    if (const auto* t = std::get_if<RateCoverage>(&target)) {
        const auto links = simulate_links(cfg, params);
        return coverage_from_links(links, params, t->thresholds, cfg.scheme, Metric::Rate);
    }

    const auto& lap = std::get<LaplaceAt>(target);
    if (lap.s < 0.0) throw std::invalid_argument("LaplaceAt: s must be non-negative");
    const double radius = cfg.region_radius > 0.0 ? cfg.region_radius : auto_region_radius(params);
    const double active_prob = active_bs_density(params.lambda_b, params.lambda_u) / params.lambda_b;
    const double c_r = channel::mean_ris_intercept(params.ris_half_length_l, params.epsilon0);
    // Mean interference from active BSs beyond the window (Campbell). Far
    // interferers are individually weak, so their Laplace factor is
    // exp(-s P_B E[I_far]) to first order. Reflected interference decays like
    // r^(1 - alpha_R) and would otherwise need a window hundreds of km wide;
    // LoS interference beyond the window is suppressed by blockage.
    const double lambda_active = active_bs_density(params.lambda_b, params.lambda_u);
    double far_field = 0.0;
    if (lap.link == channel::LinkKind::DirectNLoS)
        far_field = 2.0 * pi * lambda_active * params.c_n * std::pow(radius, 2.0 - params.alpha_n) / (params.alpha_n - 2.0);
    else if (lap.link == channel::LinkKind::RisReflected)
        far_field = pi * lambda_active * c_r * std::pow(lap.geom.d_ru, -params.alpha_r) *
                    std::pow(radius, 2.0 - params.alpha_r) / (params.alpha_r - 2.0);
    return mean_over_realizations(cfg, [&](long i) {
        if (lap.s == 0.0) return 1.0;
        const auto idx = static_cast<std::uint64_t>(i);
        channel::RngStream points(cfg.seed, idx, kLaplacePoints);
        channel::RngStream marks(cfg.seed, idx, kLaplaceMarks);
        channel::RngStream fading(cfg.seed, idx, kLaplaceFading);
        // BSs are placed around the origin, which is the UE for direct links
        // and the RIS (normal along +x) for the reflected link.
        const long n = points.poisson(params.lambda_b * pi * radius * radius);
        double interference = 0.0;
        for (long k = 0; k < n; ++k) {
            const Point q = uniform_in_disc(points, radius);
            const double d = q.norm();
            const bool los = marks.uniform() < channel::los_probability(d, params.beta_blockage);
            const bool active = marks.uniform() < active_prob;
            if (!active) continue;
            switch (lap.link) {
            case channel::LinkKind::DirectLoS:
                if (los && d > lap.d_min)
                    interference += params.c_l * std::pow(d, -params.alpha_l) * channel::sample_nakagami_power(params.m_l, fading);
                break;
            case channel::LinkKind::DirectNLoS:
                if (!los) interference += params.c_n * std::pow(d, -params.alpha_n) * channel::sample_nakagami_power(params.m_n, fading);
                break;
            case channel::LinkKind::RisReflected:
                if (q.x > 0.0 && d > lap.geom.d_br)
                    interference += c_r * std::pow(d * lap.geom.d_ru, -params.alpha_r) *
                                    channel::sample_nakagami_power(params.m_r, fading);
                break;
            }
        }
        return std::exp(-lap.s * params.p_b * (interference + far_field));
    });
}

}  // namespace riseval::mc
