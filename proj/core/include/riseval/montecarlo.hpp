#pragma once

// Poisson-point-process simulator of the typical UE at the origin.
//
// Every realization draws from its own streams keyed by (seed, index, tag),
// so estimates do not depend on chunking or on the number of worker threads,
// and two schemes run with the same seed see the same BS layout and fading.

#include "riseval/channel.hpp"
#include "riseval/config.hpp"
#include "riseval/coverage.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace riseval::mc {

enum class Scheme {
    NomaRisHetNet,
    OmaRisHetNet,   // same association; full power to the typical UE, half the resource
    NomaMacroOnly,  // no RISs: the UE is served by its strongest LoS BS or not at all
};

const char* scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);

struct MCConfig {
    double region_radius = 0.0;  // m; 0 selects auto_region_radius()
    long n_realizations = 100000;
    std::uint64_t seed = 1;
    bool instantaneous_cr = false;  // draw C_R per realization instead of E[C_R]
    Scheme scheme = Scheme::NomaRisHetNet;
    int jobs = 1;

    void validate(const SystemParams& params) const;
};

/// Twice max(10/beta, 5/sqrt(pi lambda_B), 5/sqrt(pi lambda_R)).
double auto_region_radius(const SystemParams& params);
/// The smallest radius accepted by MCConfig::validate.
double minimum_region_radius(const SystemParams& params);

struct Point {
    double x = 0.0;
    double y = 0.0;
    double norm() const;
};

struct BsPoint {
    Point pos;
    double dist = 0.0;  // to the typical UE
    bool los = false;
    bool active = false;
};

enum class ServingKind { None, LosBs, Ris };

struct ServingChoice {
    ServingKind kind = ServingKind::None;
    long bs_index = -1;
    long ris_index = -1;
};

struct NetworkRealization {
    double radius = 0.0;
    std::vector<BsPoint> bs_points;
    // Only the RIS nearest the typical UE is materialized; no other RIS
    // reflects toward it, and association only ever considers the nearest.
    std::vector<Point> ris_points;
    double c_r = 0.0;
    // Per-BS unit-mean fading powers: direct link (m_L or m_N by LoS mark)
    // and reflected link through the serving RIS (m_R). Empty when fading
    // was not requested.
    std::vector<double> direct_fading;
    std::vector<double> ris_fading;
    long load = 1;  // BS load drawn from the load PMF
};

NetworkRealization sample_realization(const MCConfig& cfg, const SystemParams& params, long index,
                                      bool draw_fading = true);

/// Index of the BS nearest to a point, or -1 if there is none.
long nearest_bs(const NetworkRealization& r, const Point& p);

ServingChoice associate(const NetworkRealization& r, const SystemParams& params, Scheme scheme = Scheme::NomaRisHetNet);

/// Unit-transmit-power signal and interference seen by the typical UE.
struct LinkSample {
    ServingKind kind = ServingKind::None;
    channel::PathlossCase pathloss_case = channel::PathlossCase::Small;
    double signal = 0.0;        // gain * fading of the serving link
    double interference = 0.0;  // I_L + I_N (+ I_R when RIS-served)
    long load = 1;
};

LinkSample link_sample(const NetworkRealization& r, const ServingChoice& choice, const SystemParams& params);

struct SinrOutcome {
    double sinr_t = 0.0;    // decoding SINR of the typical UE's own message
    double sinr_sic = 0.0;  // SIC-stage SINR (Small case only)
    bool sic_ok = false;
    channel::PathlossCase pathloss_case = channel::PathlossCase::Small;
    bool covered = false;
};

/// Applies the NOMA (or OMA) decoding rules at transmit power p_b.
SinrOutcome sinr_outcome(const LinkSample& link, double p_b, double sigma2, const SystemParams& params,
                         double tau_t, double tau_c, Scheme scheme);

SinrOutcome evaluate_sinr(const NetworkRealization& r, const ServingChoice& choice, const SystemParams& params,
                          const coverage::ThresholdSet& thresholds, Scheme scheme = Scheme::NomaRisHetNet);

enum class Engine { Analytic, MonteCarlo };

struct CoverageResult {
    double estimate = 0.0;
    double std_error = 0.0;  // Monte Carlo standard error; quadrature error for analytic values
    long samples = 0;        // realizations (0 for analytic)
    Engine engine = Engine::MonteCarlo;
};

struct AssocProb {};
struct SinrCoverage {
    coverage::ThresholdSet thresholds;
};
struct RateCoverage {
    coverage::ThresholdSet thresholds;
};
/// E[exp(-s I)] for one interference class. DirectLoS counts LoS BSs beyond
/// d_min, DirectNLoS counts every NLoS BS, RisReflected counts BSs on the
/// reflecting side of a RIS at distance geom.d_ru from the UE, farther than
/// geom.d_br from the RIS. Interferers beyond the window enter through their
/// mean (first order in s), which matters for the slowly decaying reflected
/// interference.
struct LaplaceAt {
    double s = 0.0;
    channel::LinkKind link = channel::LinkKind::DirectLoS;
    double d_min = 0.0;
    coverage::RisGeometry geom;
};

using Target = std::variant<AssocProb, SinrCoverage, RateCoverage, LaplaceAt>;

CoverageResult estimate(const MCConfig& cfg, const SystemParams& params, const Target& target);

/// Serving-link samples for every realization; reused across power and
/// threshold sweeps so that all points share one set of worlds.
std::vector<LinkSample> simulate_links(const MCConfig& cfg, const SystemParams& params);

enum class Metric { Sinr, Rate };

CoverageResult coverage_from_links(std::span<const LinkSample> links, const SystemParams& params,
                                   const coverage::ThresholdSet& thresholds, Scheme scheme, Metric metric);

}  // namespace riseval::mc
