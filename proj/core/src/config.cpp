#include "riseval/config.hpp"

#include "riseval/channel.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace riseval {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

enum class Unit { Plain, PerKm2, Decibel };

// Field table: canonical key -> setter taking a value in canonical units.
using Setter = std::function<void(SystemParams&, double)>;

const std::unordered_map<std::string, Setter>& field_setters()
{
    static const std::unordered_map<std::string, Setter> table = {
        {"lambda_b", [](SystemParams& p, double v) { p.lambda_b = v; }},
        {"lambda_r", [](SystemParams& p, double v) { p.lambda_r = v; }},
        {"lambda_u", [](SystemParams& p, double v) { p.lambda_u = v; }},
        {"p_b", [](SystemParams& p, double v) { p.p_b = v; }},
        {"bandwidth_w", [](SystemParams& p, double v) { p.bandwidth_w = v; }},
        {"alpha_l", [](SystemParams& p, double v) { p.alpha_l = v; }},
        {"alpha_n", [](SystemParams& p, double v) { p.alpha_n = v; }},
        {"alpha_r", [](SystemParams& p, double v) { p.alpha_r = v; }},
        {"c_l", [](SystemParams& p, double v) { p.c_l = v; }},
        {"c_n", [](SystemParams& p, double v) { p.c_n = v; }},
        {"m_l", [](SystemParams& p, double v) { p.m_l = static_cast<int>(v); }},
        {"m_n", [](SystemParams& p, double v) { p.m_n = static_cast<int>(v); }},
        {"m_r", [](SystemParams& p, double v) { p.m_r = static_cast<int>(v); }},
        {"ris_half_length_l", [](SystemParams& p, double v) { p.ris_half_length_l = v; }},
        {"epsilon0", [](SystemParams& p, double v) { p.epsilon0 = v; }},
        {"a_s", [](SystemParams& p, double v) { p.a_s = v; }},
        {"a_l_pow", [](SystemParams& p, double v) { p.a_l_pow = v; }},
        {"beta_blockage", [](SystemParams& p, double v) { p.beta_blockage = v; }},
        {"noise_figure_nf", [](SystemParams& p, double v) { p.noise_figure_nf = v; }},
        {"d_c", [](SystemParams& p, double v) { p.d_c = v; }},
        {"tau_t", [](SystemParams& p, double v) { p.tau_t = v; }},
        {"tau_c", [](SystemParams& p, double v) { p.tau_c = v; }},
        {"rho_t", [](SystemParams& p, double v) { p.rho_t = v; }},
        {"rho_c", [](SystemParams& p, double v) { p.rho_c = v; }},
    };
    return table;
}

bool is_density_key(std::string_view key)
{
    return key == "lambda_b" || key == "lambda_r" || key == "lambda_u";
}

bool is_threshold_key(std::string_view key) { return key == "tau_t" || key == "tau_c"; }

// Integer-valued fields are parsed as doubles and checked for integrality so
// "m_l = 4.5" is reported instead of silently truncated.
bool is_integer_key(std::string_view key) { return key == "m_l" || key == "m_n" || key == "m_r"; }

double parse_number(std::string_view text, const std::string& where)
{
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw ConfigParseError(where + ": cannot parse number '" + std::string(text) + "'");
    return value;
}

void require(bool ok, const char* key, const std::string& message)
{
    if (!ok) throw ValidationError(key, message);
}

void require_positive(double v, const char* key)
{
    require(std::isfinite(v) && v > 0.0, key, std::string(key) + " must be strictly positive");
}

void require_integral_order(int m, const char* key)
{
    require(m >= 1, key, std::string(key) + " must be a positive integer");
}

}  // namespace

void validate(const SystemParams& p)
{
    require_positive(p.lambda_b, "lambda_b");
    require_positive(p.lambda_r, "lambda_r");
    require_positive(p.lambda_u, "lambda_u");
    require_positive(p.p_b, "p_b");
    require_positive(p.bandwidth_w, "bandwidth_w");
    require_positive(p.c_l, "c_l");
    require_positive(p.c_n, "c_n");
    require_positive(p.ris_half_length_l, "ris_half_length_l");
    require_positive(p.beta_blockage, "beta_blockage");
    require_positive(p.d_c, "d_c");
    require_positive(p.tau_t, "tau_t");
    require_positive(p.tau_c, "tau_c");
    require_positive(p.rho_t, "rho_t");
    require_positive(p.rho_c, "rho_c");
    require(std::isfinite(p.noise_figure_nf), "noise_figure_nf", "noise_figure_nf must be finite");

    // LoS interference is damped by blockage, so alpha_l = 2 still converges.
    require(p.alpha_l >= 2.0, "alpha_l", "alpha_l >= 2 required");
    require(p.alpha_n > 2.0, "alpha_n", "alpha_n > 2 required");
    require(p.alpha_r > 2.0, "alpha_r", "alpha_r > 2 required");

    require_integral_order(p.m_l, "m_l");
    require_integral_order(p.m_n, "m_n");
    require_integral_order(p.m_r, "m_r");

    require(p.epsilon0 > 0.0 && p.epsilon0 < 1.0, "epsilon0", "epsilon0 must lie in (0,1)");

    require_positive(p.a_s, "a_s");
    require_positive(p.a_l_pow, "a_l_pow");
    require(std::abs(p.a_s + p.a_l_pow - 1.0) <= 1e-12, "a_l_pow", "a_s + a_l = 1 violated");
    require(p.a_s <= p.a_l_pow, "a_s", "a_s ≤ a_l violated");
}

SystemParams parse_params(std::istream& in, const std::string& source_name)
{
    SystemParams params;
    const auto& setters = field_setters();

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;

        const std::string where = source_name + ":" + std::to_string(line_no);
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigParseError(where + ": expected 'key = value'");
        const auto raw_key = trim(view.substr(0, eq));
        const auto raw_value = trim(view.substr(eq + 1));
        if (raw_key.empty() || raw_value.empty())
            throw ConfigParseError(where + ": expected 'key = value'");

        std::string key(raw_key);
        Unit unit = Unit::Plain;
        if (ends_with(key, "_per_km2")) {
            key.resize(key.size() - std::string_view("_per_km2").size());
            if (!is_density_key(key))
                throw ConfigParseError(where + ": '_per_km2' suffix only applies to densities");
            unit = Unit::PerKm2;
        } else if (ends_with(key, "_db") && is_threshold_key(key.substr(0, key.size() - 3))) {
            key.resize(key.size() - 3);
            unit = Unit::Decibel;
        }

        const auto setter = setters.find(key);
        if (setter == setters.end())
            throw ConfigParseError(where + ": unknown key '" + std::string(raw_key) + "'");

        double value = parse_number(raw_value, where);
        switch (unit) {
        case Unit::PerKm2: value = per_km2_to_per_m2(value); break;
        case Unit::Decibel: value = db_to_linear(value); break;
        case Unit::Plain: break;
        }
        if (is_integer_key(key) && (value != std::floor(value) || value < 1.0 || value > 1e6))
            throw ValidationError(key, key + " must be a positive integer");
        setter->second(params, value);
    }

    validate(params);
    return params;
}

SystemParams load_params(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open config file: " + path.string());
    return parse_params(in, path.string());
}

SystemParams load_params_from_environment()
{
    if (const char* env = std::getenv("RIS_HETNET_CONFIG"); env != nullptr && *env != '\0')
        return load_params(env);
    return SystemParams{};
}

void save_params(const SystemParams& p, std::ostream& out)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "# riseval parameters, SI units\n";
    out << "lambda_b = " << p.lambda_b << '\n';
    out << "lambda_r = " << p.lambda_r << '\n';
    out << "lambda_u = " << p.lambda_u << '\n';
    out << "p_b = " << p.p_b << '\n';
    out << "bandwidth_w = " << p.bandwidth_w << '\n';
    out << "alpha_l = " << p.alpha_l << '\n';
    out << "alpha_n = " << p.alpha_n << '\n';
    out << "alpha_r = " << p.alpha_r << '\n';
    out << "c_l = " << p.c_l << '\n';
    out << "c_n = " << p.c_n << '\n';
    out << "m_l = " << p.m_l << '\n';
    out << "m_n = " << p.m_n << '\n';
    out << "m_r = " << p.m_r << '\n';
    out << "ris_half_length_l = " << p.ris_half_length_l << '\n';
    out << "epsilon0 = " << p.epsilon0 << '\n';
    out << "a_s = " << p.a_s << '\n';
    out << "a_l_pow = " << p.a_l_pow << '\n';
    out << "beta_blockage = " << p.beta_blockage << '\n';
    out << "noise_figure_nf = " << p.noise_figure_nf << '\n';
    out << "d_c = " << p.d_c << '\n';
    out << "tau_t = " << p.tau_t << '\n';
    out << "tau_c = " << p.tau_c << '\n';
    out << "rho_t = " << p.rho_t << '\n';
    out << "rho_c = " << p.rho_c << '\n';
    out.flags(flags);
    out.precision(precision);
}

std::string to_config_string(const SystemParams& params)
{
    std::ostringstream os;
    save_params(params, os);
    return os.str();
}

double active_bs_density(double lambda_b, double lambda_u)
{
    // 1 - (1+u)^-3.5 via expm1/log1p so lambda_u -> 0 stays accurate.
    const double u = lambda_u / (3.5 * lambda_b);
    return lambda_b * -std::expm1(-3.5 * std::log1p(u));
}

double noise_power_watts(double bandwidth_hz, double noise_figure_db)
{
    const double dbm = -170.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double alzer_eta(int m)
{
    // m (m!)^(-1/m) with log-factorial to avoid overflow for large m.
    double log_fact = 0.0;
    for (int k = 2; k <= m; ++k) log_fact += std::log(static_cast<double>(k));
    return m * std::exp(-log_fact / m);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double per_km2_to_per_m2(double density_per_km2) { return density_per_km2 * 1e-6; }

double transmit_power_for_snr(double snr_db, double sigma2) { return sigma2 * db_to_linear(snr_db); }

DerivedParams derive(const SystemParams& p)
{
    validate(p);
    DerivedParams d;
    d.lambda_b_active = active_bs_density(p.lambda_b, p.lambda_u);
    d.sigma2 = noise_power_watts(p.bandwidth_w, p.noise_figure_nf);
    d.eta_l = alzer_eta(p.m_l);
    d.eta_n = alzer_eta(p.m_n);
    d.eta_r = alzer_eta(p.m_r);
    d.c_r_mean = channel::mean_ris_intercept(p.ris_half_length_l, p.epsilon0);
    d.p_nlos_all = std::exp(-2.0 * std::numbers::pi * p.lambda_b / (p.beta_blockage * p.beta_blockage));
    d.p_los_exists = 1.0 - d.p_nlos_all;
    d.c_lr_ratio = std::pow(p.c_l / d.c_r_mean, 1.0 / p.alpha_l);
    d.lambda_ratio_rb = p.lambda_r / p.lambda_b;
    d.mean_load = 1.0 + 1.28 * p.lambda_u / p.lambda_b;
    return d;
}

}  // namespace riseval
