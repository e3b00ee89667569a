#pragma once

// Link-level physics: blockage, direct and reflected path loss, the RIS
// intercept, and the random streams used to draw fading.

#include <cmath>
#include <cstdint>
#include <limits>

#include "riseval/config.hpp"

namespace riseval::channel {

enum class LinkKind {
    DirectLoS,
    DirectNLoS,
    RisReflected,
};

enum class PathlossCase {
    Small,  // typical UE performs SIC
    Large,  // paired UE performs SIC; typical UE treats it as noise
};

/// Arrival/departure angles at a RIS, theta_br = eps0 * theta and
/// theta_ru = (1 - eps0) * theta.
struct AnglePair {
    double theta_br = 0.0;
    double theta_ru = 0.0;
};

AnglePair split_angle(double theta, double epsilon0);

/// e^(-beta d).
double los_probability(double d, double beta);
/// 1 - e^(-beta d), computed without cancellation at small beta d.
double nlos_probability(double d, double beta);

/// C_kappa d^(-alpha_kappa). `kind` must be a direct link.
double pathloss_direct(double d, LinkKind kind, const SystemParams& params);

/// C_R (d_br d_ru)^(-alpha_r).
double pathloss_ris(double d_br, double d_ru, double c_r, double alpha_r);

/// L^2 / (16 pi^2) (cos theta_br + cos theta_ru)^2.
double instantaneous_ris_intercept(double half_length, const AnglePair& angles);

/// Average of the instantaneous intercept for theta ~ U[0, pi]. Continuous
/// through the removable singularity at eps0 = 1/2, where it is L^2/(8 pi^2).
double mean_ris_intercept(double half_length, double epsilon0);

/// xoshiro256** seeded through splitmix64. Each (seed, index, tag) triple
/// names an independent stream, so realizations can be generated in any order
/// and different consumers of randomness never share draws.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag);
    explicit RngStream(std::uint64_t seed) : RngStream(seed, 0, 0) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }
    double exponential() { return -std::log(uniform_pos()); }
    long poisson(double mean);

private:
    std::uint64_t s_[4];
};

/// Unit-mean Gamma(m, 1/m) draw: the power of a Nakagami-m amplitude.
double sample_nakagami_power(int m, RngStream& rng);

}  // namespace riseval::channel
