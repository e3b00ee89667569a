// riseval: batch sweeps and analytic-vs-simulation comparisons.
//
// Exit status: 0 ok, 1 usage or configuration error, 2 evaluation failure.

#include "riseval/config.hpp"
#include "riseval/experiment.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace {

constexpr int kUsage = 1;
constexpr int kEvaluation = 2;

riseval::SystemParams load(const std::string& path, const std::vector<std::string>& overrides)
{
    riseval::SystemParams p = path.empty() ? riseval::load_params_from_environment() : riseval::load_params(path);
    if (!overrides.empty()) {
        // Overrides go through the config parser on top of the loaded values.
        std::stringstream doc;
        riseval::save_params(p, doc);
        for (const auto& o : overrides) doc << o << '\n';
        p = riseval::parse_params(doc, "--set");
    }
    return p;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coverage and association evaluation for RIS-aided NOMA HetNets"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    riseval::experiment::RunOptions options;

    auto* run = app.add_subcommand("run", "Evaluate a sweep and write CSV");
    std::string preset_name, sweep_text, out_path = "-";
    run->add_option("--config", config_path, "Parameter file (key = value)");
    run->add_option("--set", overrides, "Parameter override, key=value (repeatable)");
    auto* preset_opt = run->add_option("--preset", preset_name, "Figure preset: fig2..fig7");
    auto* sweep_opt = run->add_option("--sweep", sweep_text, "Sweep spec, e.g. \"var=snr_db;values=-10:5:30\"");
    preset_opt->excludes(sweep_opt);
    run->add_option("--out", out_path, "CSV output path, - for stdout");
    run->add_option("--jobs", options.jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
    run->add_option("--seed", options.seed, "Simulation seed");
    run->add_option("--realizations", options.realizations, "Monte Carlo realizations per point")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--region-radius", options.region_radius, "Simulation disc radius in m (0 = automatic)");

    auto* cmp = app.add_subcommand("compare", "Compare analytic and Monte Carlo values at one point");
    std::string metric_text = "assoc";
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    cmp->add_option("--config", config_path, "Parameter file (key = value)");
    cmp->add_option("--set", overrides, "Parameter override, key=value (repeatable)");
    cmp->add_option("--metric", metric_text, "assoc, sinr_cov or rate_cov");
    cmp->add_option("--snr-db", snr_db, "Transmit SNR P_B / sigma^2 in dB (overrides p_b)");
    cmp->add_option("--jobs", options.jobs, "Simulation threads")->check(CLI::PositiveNumber);
    cmp->add_option("--seed", options.seed, "Simulation seed");
    cmp->add_option("--realizations", options.realizations, "Monte Carlo realizations")
        ->check(CLI::NonNegativeNumber);
    cmp->add_option("--region-radius", options.region_radius, "Simulation disc radius in m (0 = automatic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsage;
    }

    namespace ex = riseval::experiment;
    riseval::SystemParams params;
    std::vector<ex::SweepSpec> sweeps;
    ex::MetricKind metric = ex::MetricKind::Assoc;
    try {
        params = load(config_path, overrides);
        if (run->parsed()) {
            if (preset_name.empty() == sweep_text.empty()) throw ex::UsageError("run needs exactly one of --preset or --sweep");
            sweeps = preset_name.empty() ? std::vector{ex::parse_sweep(sweep_text)} : ex::preset(preset_name);
        } else {
            metric = ex::parse_metric(metric_text);
            if (!std::isnan(snr_db)) ex::apply(params, ex::SweepVariable::SnrDb, snr_db);
            riseval::validate(params);
        }
    } catch (const std::exception& e) {
        std::cerr << "riseval: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (cmp->parsed()) {
            ex::print_report(std::cout, ex::compare(params, metric, options));
            return 0;
        }
        std::vector<ex::Row> rows;
        for (const auto& s : sweeps) {
            auto part = ex::run_sweep(params, s, options, &std::cerr);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        std::ofstream file;
        std::ostream* out = &std::cout;
        if (out_path != "-") {
            file.open(out_path);
            if (!file) throw std::runtime_error("cannot open " + out_path + " for writing");
            out = &file;
        }
        ex::write_csv_header(*out);
        ex::write_csv_rows(*out, rows);
        out->flush();
        if (!*out) throw std::runtime_error("write to " + out_path + " failed");
    } catch (const std::exception& e) {
        std::cerr << "riseval: " << e.what() << '\n';
        return kEvaluation;
    }
    return 0;
}
