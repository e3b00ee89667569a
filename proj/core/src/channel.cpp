#include "riseval/channel.hpp"

#include <numbers>
#include <random>
#include <stdexcept>

namespace riseval::channel {

namespace {

constexpr double pi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

AnglePair split_angle(double theta, double epsilon0) { return {epsilon0 * theta, (1.0 - epsilon0) * theta}; }

double los_probability(double d, double beta)
{
    if (d < 0.0 || beta <= 0.0) throw std::domain_error("los_probability: require d >= 0, beta > 0");
    return std::exp(-beta * d);
}

double nlos_probability(double d, double beta)
{
    if (d < 0.0 || beta <= 0.0) throw std::domain_error("nlos_probability: require d >= 0, beta > 0");
    return -std::expm1(-beta * d);
}

double pathloss_direct(double d, LinkKind kind, const SystemParams& params)
{
    if (!(d > 0.0)) throw std::domain_error("pathloss_direct: distance must be positive");
    switch (kind) {
    case LinkKind::DirectLoS:
        return params.c_l * std::pow(d, -params.alpha_l);
    case LinkKind::DirectNLoS:
        return params.c_n * std::pow(d, -params.alpha_n);
    case LinkKind::RisReflected:
        break;
    }
    throw std::invalid_argument("pathloss_direct: reflected link has no direct path loss");
}

double pathloss_ris(double d_br, double d_ru, double c_r, double alpha_r)
{
    if (!(d_br > 0.0) || !(d_ru > 0.0)) throw std::domain_error("pathloss_ris: distances must be positive");
    return c_r * std::pow(d_br * d_ru, -alpha_r);
}

double instantaneous_ris_intercept(double half_length, const AnglePair& angles)
{
    const double c = std::cos(angles.theta_br) + std::cos(angles.theta_ru);
    return half_length * half_length / (16.0 * pi * pi) * c * c;
}

double mean_ris_intercept(double half_length, double epsilon0)
{
    if (!(epsilon0 > 0.0 && epsilon0 < 1.0)) throw std::domain_error("mean_ris_intercept: epsilon0 must lie in (0, 1)");
    // sin(2 pi e) / (4e - 12e^2 + 8e^3) = [sin(pi d) / d] / (4 e (1 - e)), d = 1 - 2e.
    const double delta = 1.0 - 2.0 * epsilon0;
    const double x = pi * delta;
    const double sinc = std::abs(delta) < 1e-4 ? pi * (1.0 - x * x / 6.0 + x * x * x * x / 120.0) : std::sin(x) / delta;
    const double ratio = sinc / (4.0 * epsilon0 * (1.0 - epsilon0));
    return half_length * half_length / (16.0 * pi * pi * pi) * (pi + ratio);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag)
{
    std::uint64_t state = seed;
    state = splitmix64(state) ^ index;
    state = splitmix64(state) ^ tag;
    for (auto& word : s_) word = splitmix64(state);
}

RngStream::result_type RngStream::operator()()
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

long RngStream::poisson(double mean)
{
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<long> dist(mean);
    return dist(*this);
}

double sample_nakagami_power(int m, RngStream& rng)
{
    if (m < 1) throw std::domain_error("sample_nakagami_power: m must be >= 1");
    // Integer shape: a Gamma(m, 1) variate is a sum of m unit exponentials.
    double product = 1.0;
    for (int k = 0; k < m; ++k) product *= rng.uniform_pos();
    return -std::log(product) / m;
}

}  // namespace riseval::channel
