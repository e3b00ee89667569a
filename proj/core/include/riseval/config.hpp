#pragma once

// Model parameters for RIS-aided NOMA heterogeneous networks.
//
// Everything inside the library is SI: metres, watts, hertz, linear SINR,
// densities in points per square metre. Conversions from km^-2 / dB / dBm
// happen only in this module.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

namespace riseval {

/// Raised when a parameter set violates a model invariant. `key()` names the
/// offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string key, const std::string& what)
        : std::invalid_argument(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Raised on a malformed config document (bad line, unknown key, bad number).
class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SystemParams {
    // Densities, m^-2.
    double lambda_b = 10e-6;
    double lambda_r = 50e-6;
    double lambda_u = 100e-6;

    double p_b = 1.0;            // W
    double bandwidth_w = 100e6;  // Hz

    double alpha_l = 2.0;
    double alpha_n = 4.0;
    double alpha_r = 2.8;
    double c_l = 1.0;
    double c_n = 1.0;

    int m_l = 4;
    int m_n = 1;
    int m_r = 4;

    double ris_half_length_l = 1.0;  // m
    double epsilon0 = 0.5;

    double a_s = 0.3;
    double a_l_pow = 0.7;

    double beta_blockage = 1.0 / 141.4;  // m^-1
    double noise_figure_nf = 10.0;       // dB
    double d_c = 50.0;                   // m

    double tau_t = 0.01;  // linear
    double tau_c = 0.01;  // linear
    double rho_t = 1e6;   // bit/s
    double rho_c = 1e6;   // bit/s

    bool operator==(const SystemParams&) const = default;
};

/// Quantities computed once per parameter set.
struct DerivedParams {
    double lambda_b_active = 0.0;  // active-BS density, m^-2
    double sigma2 = 0.0;           // noise power, W
    double eta_l = 1.0;
    double eta_n = 1.0;
    double eta_r = 1.0;
    double c_r_mean = 0.0;       // mean RIS intercept
    double p_los_exists = 0.0;   // P(at least one LoS BS)
    double p_nlos_all = 0.0;     // 1 - p_los_exists
    double c_lr_ratio = 0.0;     // (C_L / E[C_R])^(1/alpha_L)
    double lambda_ratio_rb = 0.0;
    double mean_load = 1.0;
};

/// Checks every SystemParams invariant, throwing ValidationError on the first
/// violation.
void validate(const SystemParams& params);

/// Parses a flat `key = value` document. Missing keys keep their defaults.
SystemParams parse_params(std::istream& in, const std::string& source_name = "<stream>");

SystemParams load_params(const std::filesystem::path& path);

/// Reads the file named by RIS_HETNET_CONFIG, or returns defaults when unset.
SystemParams load_params_from_environment();

/// Writes every field in canonical units with round-trip precision.
void save_params(const SystemParams& params, std::ostream& out);
std::string to_config_string(const SystemParams& params);

DerivedParams derive(const SystemParams& params);

// Active-BS density lambda_B (1 - (1 + lambda_U / (3.5 lambda_B))^-3.5).
double active_bs_density(double lambda_b, double lambda_u);

/// Noise power in watts from -170 dBm/Hz + 10 log10 W + N_f.
double noise_power_watts(double bandwidth_hz, double noise_figure_db);

/// m (m!)^(-1/m), the constant of the gamma-CDF lower bound.
double alzer_eta(int m);

double db_to_linear(double db);
double linear_to_db(double linear);
double per_km2_to_per_m2(double density_per_km2);

/// Transmit SNR is P_B / sigma^2; returns the P_B that realizes `snr_db`.
double transmit_power_for_snr(double snr_db, double sigma2);

}  // namespace riseval
