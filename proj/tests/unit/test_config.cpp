#include "riseval/config.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace riseval;

namespace {

SystemParams parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_params(in);
}

std::string validation_message(const std::string& text)
{
    try {
        parse(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("empty document yields the default parameter set")
{
    const SystemParams p = parse("");
    CHECK(p == SystemParams{});
    CHECK(p.bandwidth_w == 100e6);
    CHECK(p.alpha_l == 2.0);
    CHECK(p.alpha_r == 2.8);
    CHECK(p.alpha_n == 4.0);
    CHECK(p.m_l == 4);
    CHECK(p.m_r == 4);
    CHECK(p.m_n == 1);
    CHECK(p.a_s == 0.3);
    CHECK(p.a_l_pow == 0.7);
    CHECK(p.ris_half_length_l == 1.0);
    CHECK(p.lambda_u == doctest::Approx(100e-6).epsilon(1e-15));
    CHECK(p.beta_blockage == doctest::Approx(1.0 / 141.4).epsilon(1e-15));
    CHECK(p.noise_figure_nf == 10.0);
    CHECK(p.tau_t == doctest::Approx(db_to_linear(-20.0)).epsilon(1e-15));
    CHECK(p.tau_c == doctest::Approx(db_to_linear(-20.0)).epsilon(1e-15));
    CHECK(p.rho_t == 1e6);
    CHECK(p.rho_c == 1e6);
    CHECK(p.d_c == 50.0);
}

TEST_CASE("power split violations are rejected")
{
    CHECK(validation_message("a_s = 0.6\na_l_pow = 0.4\n") == "a_s ≤ a_l violated");
    CHECK(validation_message("a_s = 0.3\na_l_pow = 0.6\n") == "a_s + a_l = 1 violated");
}

TEST_CASE("path-loss exponents must keep interference integrals finite")
{
    CHECK(validation_message("alpha_r = 2.0\n") == "alpha_r > 2 required");
    CHECK(validation_message("alpha_n = 1.5\n") == "alpha_n > 2 required");
    CHECK(validation_message("alpha_l = 1.9\n") == "alpha_l >= 2 required");
    CHECK(validation_message("alpha_l = 2.0\n").empty());
}

TEST_CASE("validation names the offending key")
{
    SystemParams p;
    p.epsilon0 = 1.0;
    try {
        validate(p);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.key() == "epsilon0");
    }
    p = SystemParams{};
    p.lambda_r = 0.0;
    CHECK_THROWS_AS(validate(p), ValidationError);
    p = SystemParams{};
    p.m_r = 0;
    CHECK_THROWS_AS(validate(p), ValidationError);
}

TEST_CASE("malformed documents raise parse errors")
{
    CHECK_THROWS_AS(parse("lambda_b 3\n"), ConfigParseError);
    CHECK_THROWS_AS(parse("no_such_key = 1\n"), ConfigParseError);
    CHECK_THROWS_AS(parse("lambda_b = fast\n"), ConfigParseError);
    CHECK_THROWS_AS(parse("lambda_b =\n"), ConfigParseError);
    CHECK_THROWS_AS(parse("p_b_per_km2 = 3\n"), ConfigParseError);
    CHECK_THROWS_AS(parse("m_l = 2.5\n"), ValidationError);
}

TEST_CASE("unit suffixes convert into SI")
{
    const SystemParams p = parse("lambda_b_per_km2 = 20  # dense\nlambda_r_per_km2 = 200\ntau_t_db = -5\n");
    CHECK(p.lambda_b == doctest::Approx(20e-6).epsilon(1e-15));
    CHECK(p.lambda_r == doctest::Approx(200e-6).epsilon(1e-15));
    CHECK(p.tau_t == doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-15));
    CHECK(p.tau_c == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("saved parameters parse back bit-identically")
{
    SystemParams p;
    p.lambda_b = 1.0 / 3.0 * 1e-5;
    p.p_b = 0.123456789012345;
    p.m_r = 3;
    p.epsilon0 = 0.25;
    CHECK(parse(to_config_string(p)) == p);
}

TEST_CASE("load_params reads files and the environment fallback")
{
    const auto path = std::filesystem::temp_directory_path() / "riseval_test_params.cfg";
    {
        std::ofstream out(path);
        out << "lambda_b_per_km2 = 5\n";
    }
    CHECK(load_params(path).lambda_b == doctest::Approx(5e-6).epsilon(1e-15));
    CHECK_THROWS_AS(load_params(path.string() + ".missing"), ConfigParseError);

    ::setenv("RIS_HETNET_CONFIG", path.c_str(), 1);
    CHECK(load_params_from_environment().lambda_b == doctest::Approx(5e-6).epsilon(1e-15));
    ::unsetenv("RIS_HETNET_CONFIG");
    CHECK(load_params_from_environment() == SystemParams{});
    std::filesystem::remove(path);
}

TEST_CASE("derived quantities")
{
    const DerivedParams d = derive(SystemParams{});
    // 1 - (1 + 10/3.5)^-3.5
    CHECK(d.lambda_b_active / 10e-6 == doctest::Approx(0.99112701054282684368).epsilon(1e-14));
    // -170 dBm/Hz + 80 dB + 10 dB = -80 dBm
    CHECK(d.sigma2 == doctest::Approx(1e-11).epsilon(1e-14));
    CHECK(linear_to_db(d.sigma2) + 30.0 == doctest::Approx(-80.0).epsilon(1e-14));
    CHECK(d.p_los_exists + d.p_nlos_all == 1.0);
    CHECK(d.p_los_exists == doctest::Approx(0.715282425594275853629).epsilon(1e-13));
    CHECK(d.c_r_mean == doctest::Approx(0.0126651479552922).epsilon(1e-13));
    CHECK(d.lambda_ratio_rb == doctest::Approx(5.0));
    CHECK(d.mean_load == doctest::Approx(1.0 + 1.28 * 10.0));
    CHECK(d.eta_l == doctest::Approx(1.80720400721968966392).epsilon(1e-14));
    CHECK(d.eta_n == 1.0);
}

TEST_CASE("active density stays below both the BS and the UE density")
{
    for (double lb : {1e-6, 1e-5, 1e-4, 1e-3}) {
        for (double lu : {1e-8, 1e-6, 1e-4, 1e-2}) {
            const double active = active_bs_density(lb, lu);
            CHECK(active > 0.0);
            CHECK(active <= std::min(lb, lu) * (1.0 + 1e-12));
        }
    }
    CHECK(active_bs_density(1e-5, 1e-15) < 1e-14);
}

TEST_CASE("alzer constants")
{
    const double expected[] = {1.0, 1.41421356237309504880, 1.65096362444731334194, 1.80720400721968966392,
                               1.91925974818688743850, 2.00414512959840738458};
    for (int m = 1; m <= 6; ++m) {
        CHECK(alzer_eta(m) == doctest::Approx(expected[m - 1]).epsilon(1e-14));
        CHECK(alzer_eta(m) >= 1.0);
    }
}

TEST_CASE("transmit power for a target SNR")
{
    CHECK(transmit_power_for_snr(110.0, 1e-11) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(transmit_power_for_snr(0.0, 2e-11) == 2e-11);
}
