#include "riseval/experiment.hpp"

#include "riseval/association.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace riseval::experiment {

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size() || !std::isfinite(v)) throw UsageError("bad number '" + text + "' in " + what);
    return v;
}

std::vector<double> parse_values(const std::string& text)
{
    const std::string t = trim(text);
    if (t.empty()) throw UsageError("sweep values list is empty");
    const auto parts = split(t, ':');
    if (parts.size() == 3) {
        const double start = parse_number(parts[0], "values");
        const double step = parse_number(parts[1], "values");
        const double stop = parse_number(parts[2], "values");
        if (step == 0.0 || (stop - start) / step < 0.0) throw UsageError("values range never reaches its end");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 100000) throw UsageError("values range has too many points");
        std::vector<double> out;
        for (long k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
        return out;
    }
    if (parts.size() != 1) throw UsageError("values must be a comma list or start:step:stop");
    std::vector<double> out;
    for (const auto& item : split(t, ',')) out.push_back(parse_number(item, "values"));
    return out;
}

std::string format_g9(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

bool geometry_free(SweepVariable v)
{
    return v == SweepVariable::SnrDb || v == SweepVariable::TauDb || v == SweepVariable::Rho;
}

SystemParams with_fixed(const SystemParams& base, const SweepSpec& spec)
{
    SystemParams p = base;
    for (const auto& [var, value] : spec.fixed) apply(p, var, value);
    return p;
}

mc::MCConfig mc_config(const RunOptions& options, mc::Scheme scheme, int jobs)
{
    mc::MCConfig cfg;
    cfg.n_realizations = options.realizations;
    cfg.seed = options.seed;
    cfg.jobs = std::max(1, jobs);
    cfg.region_radius = options.region_radius;
    cfg.scheme = scheme;
    return cfg;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the failure of
// the lowest failing index so errors are reported deterministically.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn)
{
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto count = static_cast<std::size_t>(std::max(1, jobs));
    if (count <= 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < std::min(count, n); ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

const char* variable_name(SweepVariable v)
{
    switch (v) {
    case SweepVariable::LambdaB: return "lambda_b";
    case SweepVariable::LambdaR: return "lambda_r";
    case SweepVariable::SnrDb: return "snr_db";
    case SweepVariable::RisHalfLength: return "ris_half_length";
    case SweepVariable::TauDb: return "tau_db";
    case SweepVariable::Rho: return "rho";
    }
    return "?";
}

SweepVariable parse_variable(const std::string& name)
{
    for (auto v : {SweepVariable::LambdaB, SweepVariable::LambdaR, SweepVariable::SnrDb, SweepVariable::RisHalfLength,
                   SweepVariable::TauDb, SweepVariable::Rho})
        if (name == variable_name(v)) return v;
    throw UsageError("unknown sweep variable '" + name + "'");
}

const char* metric_name(MetricKind m)
{
    switch (m) {
    case MetricKind::Assoc: return "assoc";
    case MetricKind::SinrCov: return "sinr_cov";
    case MetricKind::RateCov: return "rate_cov";
    }
    return "?";
}

MetricKind parse_metric(const std::string& name)
{
    for (auto m : {MetricKind::Assoc, MetricKind::SinrCov, MetricKind::RateCov})
        if (name == metric_name(m)) return m;
    throw UsageError("unknown metric '" + name + "'");
}

void apply(SystemParams& p, SweepVariable variable, double value)
{
    switch (variable) {
    case SweepVariable::LambdaB: p.lambda_b = per_km2_to_per_m2(value); break;
    case SweepVariable::LambdaR: p.lambda_r = per_km2_to_per_m2(value); break;
    case SweepVariable::SnrDb:
        p.p_b = transmit_power_for_snr(value, noise_power_watts(p.bandwidth_w, p.noise_figure_nf));
        break;
    case SweepVariable::RisHalfLength: p.ris_half_length_l = value; break;
    case SweepVariable::TauDb: p.tau_t = p.tau_c = db_to_linear(value); break;
    case SweepVariable::Rho: p.rho_t = p.rho_c = value; break;
    }
}

void SweepSpec::validate() const
{
    if (values.empty()) throw UsageError("sweep values list is empty");
    for (std::size_t k = 1; k < values.size(); ++k)
        if (!(values[k] > values[k - 1])) throw UsageError("sweep values must be strictly increasing");
    if (!analytic && !montecarlo) throw UsageError("sweep needs at least one engine");
    if (schemes.empty()) throw UsageError("sweep needs at least one scheme");
    for (const auto& [var, value] : fixed)
        if (var == variable) throw UsageError(std::string("fixed value for the swept variable ") + variable_name(var));
}

std::string SweepSpec::label() const
{
    std::string out = variable_name(variable);
    for (std::size_t k = 0; k < fixed.size(); ++k) {
        out += k == 0 ? '@' : '&';
        out += variable_name(fixed[k].first);
        out += '=' + format_g9(fixed[k].second);
    }
    return out;
}

SweepSpec parse_sweep(const std::string& text)
{
    SweepSpec spec;
    bool have_var = false;
    bool have_values = false;
    for (const auto& raw : split(text, ';')) {
        const std::string field = trim(raw);
        if (field.empty()) continue;
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw UsageError("sweep field '" + field + "' is not key=value");
        const std::string key = trim(field.substr(0, eq));
        const std::string val = trim(field.substr(eq + 1));
        if (key == "var") {
            spec.variable = parse_variable(val);
            have_var = true;
        } else if (key == "values") {
            spec.values = parse_values(val);
            have_values = true;
        } else if (key == "metric") {
            spec.metric = parse_metric(val);
        } else if (key == "engines") {
            spec.analytic = spec.montecarlo = false;
            for (const auto& e : split(val, ',')) {
                if (trim(e) == "analytic") spec.analytic = true;
                else if (trim(e) == "montecarlo") spec.montecarlo = true;
                else throw UsageError("unknown engine '" + e + "'");
            }
        } else if (key == "schemes") {
            spec.schemes.clear();
            for (const auto& s : split(val, ',')) {
                try {
                    spec.schemes.push_back(mc::parse_scheme(trim(s)));
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
        } else if (key == "fixed") {
            for (const auto& item : split(val, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) throw UsageError("fixed entry '" + item + "' is not name:value");
                spec.fixed.emplace_back(parse_variable(trim(item.substr(0, colon))),
                                        parse_number(item.substr(colon + 1), "fixed"));
            }
        } else {
            throw UsageError("unknown sweep field '" + key + "'");
        }
    }
    if (!have_var) throw UsageError("sweep is missing var=");
    if (!have_values) throw UsageError("sweep values list is empty");
    spec.validate();
    return spec;
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

std::vector<SweepSpec> preset(const std::string& name)
{
    const std::vector<double> snr{-10, -5, 0, 5, 10, 15, 20, 25, 30};
    const std::vector<mc::Scheme> all{mc::Scheme::NomaRisHetNet, mc::Scheme::OmaRisHetNet, mc::Scheme::NomaMacroOnly};
    std::vector<SweepSpec> out;
    if (name == "fig2") {
        for (double lr : {50.0, 200.0, 400.0}) {
            SweepSpec s;
            s.variable = SweepVariable::LambdaB;
            s.values = {1, 2, 5, 10, 15, 20, 30, 40, 50};
            s.metric = MetricKind::Assoc;
            s.montecarlo = true;
            s.fixed = {{SweepVariable::LambdaR, lr}};
            out.push_back(s);
        }
    } else if (name == "fig3") {
        for (auto [lb, lr] : {std::pair{10.0, 50.0}, std::pair{20.0, 200.0}}) {
            SweepSpec s;
            s.variable = SweepVariable::SnrDb;
            s.values = snr;
            s.metric = MetricKind::SinrCov;
            s.montecarlo = true;
            s.fixed = {{SweepVariable::LambdaB, lb}, {SweepVariable::LambdaR, lr}};
            out.push_back(s);
        }
    } else if (name == "fig4") {
        SweepSpec s;
        s.variable = SweepVariable::SnrDb;
        s.values = snr;
        s.metric = MetricKind::SinrCov;
        s.montecarlo = true;
        s.schemes = all;
        out.push_back(s);
    } else if (name == "fig5") {
        SweepSpec s;
        s.variable = SweepVariable::RisHalfLength;
        s.values = {0.01, 0.1, 0.3, 1, 3, 10, 30, 100, 300, 1e3, 3e3, 1e4, 1e5, 1e6};
        s.metric = MetricKind::SinrCov;
        s.fixed = {{SweepVariable::LambdaB, 10.0}};
        out.push_back(s);
    } else if (name == "fig6") {
        for (double lb : {5.0, 10.0, 20.0, 40.0}) {
            SweepSpec s;
            s.variable = SweepVariable::LambdaR;
            s.values = {10, 25, 50, 100, 200, 400, 800};
            s.metric = MetricKind::SinrCov;
            s.fixed = {{SweepVariable::LambdaB, lb}, {SweepVariable::TauDb, -5.0}};
            out.push_back(s);
        }
    } else if (name == "fig7") {
        SweepSpec s;
        s.variable = SweepVariable::SnrDb;
        s.values = snr;
        s.metric = MetricKind::RateCov;
        s.montecarlo = true;
        s.schemes = all;
        out.push_back(s);
    } else {
        throw UsageError("unknown preset '" + name + "'");
    }
    return out;
}

std::vector<Row> run_sweep(const SystemParams& base, const SweepSpec& spec, const RunOptions& options,
                           std::ostream* log)
{
    spec.validate();
    const SystemParams fixed_params = with_fixed(base, spec);
    const std::string label = spec.label();
    std::mutex log_mutex;
    const auto note = [&](const std::string& msg) {
        if (!log) return;
        std::lock_guard lock(log_mutex);
        *log << msg << '\n';
    };

    // Power and threshold sweeps reuse one set of worlds per scheme, which
    // also pairs the schemes realization by realization.
    const bool share_links = spec.montecarlo && spec.metric != MetricKind::Assoc && geometry_free(spec.variable);
    std::map<mc::Scheme, std::vector<mc::LinkSample>> shared;
    if (share_links) {
        for (auto scheme : spec.schemes) {
            note("simulating " + std::to_string(options.realizations) + " worlds for " + mc::scheme_name(scheme));
            try {
                validate(fixed_params);
                shared[scheme] = mc::simulate_links(mc_config(options, scheme, options.jobs), fixed_params);
            } catch (const std::exception& e) {
                throw EvaluationError(label + ": simulation failed: " + e.what());
            }
        }
    }

    const std::size_t n = spec.values.size();
    // Spare threads go to the simulator when there are fewer points than jobs.
    const int inner_jobs = n >= static_cast<std::size_t>(options.jobs) ? 1 : options.jobs / static_cast<int>(n);
    std::vector<std::vector<Row>> per_point(n);
    try {
        parallel_for(n, options.jobs, [&](std::size_t i) {
            const double value = spec.values[i];
            try {
                SystemParams p = fixed_params;
                apply(p, spec.variable, value);
                validate(p);
                const auto th = coverage::ThresholdSet::from(p);
                auto& rows = per_point[i];
                const auto add = [&](mc::Scheme scheme, const char* engine, const std::string& metric, double est,
                                     double se, double n_or_tol) {
                    rows.push_back({label, value, mc::scheme_name(scheme), engine, metric, est, se, n_or_tol});
                };
                for (auto scheme : spec.schemes) {
                    // Closed forms exist only for the NOMA RIS HetNet.
                    if (spec.analytic && scheme == mc::Scheme::NomaRisHetNet) {
                        switch (spec.metric) {
                        case MetricKind::Assoc: {
                            association::AssociationOptions ao;
                            const auto r = association::assoc_prob_los(p, ao);
                            add(scheme, "analytic", "A_L", r.a_l, 0.0, r.est_error);
                            add(scheme, "analytic", "A_R", r.a_r, 0.0, r.est_error);
                            add(scheme, "analytic", "P_L", r.upper_bound_pl, 0.0, 0.0);
                            add(scheme, "analytic", "P_N", r.lower_bound_pn, 0.0, 0.0);
                            break;
                        }
                        case MetricKind::SinrCov: {
                            const auto r = coverage::sinr_coverage(th, p, options.coverage);
                            add(scheme, "analytic", "sinr_cov", r.total, 0.0, r.est_error);
                            break;
                        }
                        case MetricKind::RateCov: {
                            const auto exact = coverage::rate_coverage(th, p, coverage::RateMode::ExactSum, options.coverage);
                            const auto mean = coverage::rate_coverage(th, p, coverage::RateMode::MeanLoad, options.coverage);
                            add(scheme, "analytic", "rate_cov", exact.value, 0.0, exact.truncation_residual);
                            add(scheme, "analytic", "rate_cov_mean_load", mean.value, 0.0, 0.0);
                            break;
                        }
                        }
                    }
                    if (!spec.montecarlo) continue;
                    const auto cfg = mc_config(options, scheme, inner_jobs);
                    const auto n_real = static_cast<double>(options.realizations);
                    if (spec.metric == MetricKind::Assoc) {
                        const auto r = mc::estimate(cfg, p, mc::AssocProb{});
                        add(scheme, "montecarlo", "A_L", r.estimate, r.std_error, n_real);
                        add(scheme, "montecarlo", "A_R", 1.0 - r.estimate, r.std_error, n_real);
                        continue;
                    }
                    const auto metric = spec.metric == MetricKind::SinrCov ? mc::Metric::Sinr : mc::Metric::Rate;
                    mc::CoverageResult r;
                    if (share_links) {
                        r = mc::coverage_from_links(shared.at(scheme), p, th, scheme, metric);
                    } else {
                        const auto links = mc::simulate_links(cfg, p);
                        r = mc::coverage_from_links(links, p, th, scheme, metric);
                    }
                    add(scheme, "montecarlo", metric_name(spec.metric), r.estimate, r.std_error, n_real);
                }
                note(label + "=" + format_g9(value) + " done");
            } catch (const std::exception& e) {
                throw EvaluationError(label + "=" + format_g9(value) + ": " + e.what());
            }
        });
    } catch (const EvaluationError&) {
        throw;
    } catch (const std::exception& e) {
        throw EvaluationError(label + ": " + e.what());
    }

    std::vector<Row> rows;
    for (auto& point : per_point) rows.insert(rows.end(), point.begin(), point.end());
    return rows;
}

void write_csv_header(std::ostream& out) { out << "sweep_var,value,scheme,engine,metric,estimate,stderr,n_or_tol\n"; }

void write_csv_rows(std::ostream& out, const std::vector<Row>& rows)
{
    for (const auto& r : rows) {
        out << r.sweep_var << ',' << format_g9(r.value) << ',' << r.scheme << ',' << r.engine << ',' << r.metric << ','
            << format_g9(r.estimate) << ',' << format_g9(r.stderr_) << ',' << format_g9(r.n_or_tol) << '\n';
    }
}

bool CompareReport::pass() const
{
    return std::all_of(lines.begin(), lines.end(), [](const CompareLine& l) { return l.pass; });
}

CompareReport compare(const SystemParams& params, MetricKind metric, const RunOptions& options)
{
    validate(params);
    CompareReport report;
    report.metric = metric;
    const auto cfg = mc_config(options, mc::Scheme::NomaRisHetNet, options.jobs);
    const auto th = coverage::ThresholdSet::from(params);
    const auto line = [&](const std::string& name, double analytic, const mc::CoverageResult& sim, double tol) {
        CompareLine l{name, analytic, sim.estimate, sim.std_error, tol, false};
        l.pass = std::abs(analytic - sim.estimate) < tol;
        report.lines.push_back(l);
    };
    try {
        switch (metric) {
        case MetricKind::Assoc: {
            const auto a = association::assoc_prob_los(params);
            const auto sim = mc::estimate(cfg, params, mc::AssocProb{});
            line("A_L", a.a_l, sim, std::max(0.005, 3.0 * sim.std_error));
            report.notes = {{"P_L", a.upper_bound_pl}, {"P_N", a.lower_bound_pn}};
            break;
        }
        case MetricKind::SinrCov: {
            const auto a = coverage::sinr_coverage(th, params, options.coverage);
            const auto links = mc::simulate_links(cfg, params);
            line("sinr_cov", a.total, mc::coverage_from_links(links, params, th, cfg.scheme, mc::Metric::Sinr), 0.02);
            report.notes = {{"los_tier", a.los_tier}, {"ris_tier", a.ris_tier}};
            break;
        }
        case MetricKind::RateCov: {
            const auto exact = coverage::rate_coverage(th, params, coverage::RateMode::ExactSum, options.coverage);
            const auto mean = coverage::rate_coverage(th, params, coverage::RateMode::MeanLoad, options.coverage);
            const auto links = mc::simulate_links(cfg, params);
            line("rate_cov", exact.value, mc::coverage_from_links(links, params, th, cfg.scheme, mc::Metric::Rate), 0.03);
            report.notes = {{"rate_cov_mean_load", mean.value},
                            {"exact_minus_mean_load", exact.value - mean.value},
                            {"pmf_truncation_residual", exact.truncation_residual}};
            break;
        }
        }
    } catch (const std::exception& e) {
        throw EvaluationError(std::string(metric_name(metric)) + ": " + e.what());
    }
    return report;
}

void print_report(std::ostream& out, const CompareReport& report)
{
    out << "metric " << metric_name(report.metric) << '\n';
    for (const auto& l : report.lines) {
        out << l.quantity << ": analytic " << format_g9(l.analytic) << "  montecarlo " << format_g9(l.montecarlo)
            << " +- " << format_g9(l.std_error) << "  gap " << format_g9(std::abs(l.analytic - l.montecarlo))
            << "  tol " << format_g9(l.tolerance) << "  " << (l.pass ? "PASS" : "FAIL") << '\n';
    }
    for (const auto& [name, value] : report.notes) out << name << ": " << format_g9(value) << '\n';
}

}  // namespace riseval::experiment
