#pragma once

// Parameter sweeps, analytic-vs-simulation comparison, and CSV emission.

#include "riseval/config.hpp"
#include "riseval/coverage.hpp"
#include "riseval/montecarlo.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace riseval::experiment {

/// Malformed sweep text or preset name; the CLI maps it to a usage error.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An evaluator failed; the message names the sweep point.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Units as typed by users: densities in km^-2, SNR and thresholds in dB,
// half-length in m, rate thresholds in bit/s.
enum class SweepVariable { LambdaB, LambdaR, SnrDb, RisHalfLength, TauDb, Rho };

enum class MetricKind { Assoc, SinrCov, RateCov };

const char* variable_name(SweepVariable v);
SweepVariable parse_variable(const std::string& name);
const char* metric_name(MetricKind m);
MetricKind parse_metric(const std::string& name);

/// Writes one swept value into params.
void apply(SystemParams& params, SweepVariable variable, double value);

struct SweepSpec {
    SweepVariable variable = SweepVariable::SnrDb;
    std::vector<double> values;
    MetricKind metric = MetricKind::SinrCov;
    bool analytic = true;
    bool montecarlo = false;
    std::vector<mc::Scheme> schemes{mc::Scheme::NomaRisHetNet};
    // Applied before the swept value; they also tag the sweep_var column.
    std::vector<std::pair<SweepVariable, double>> fixed;

    void validate() const;
    /// sweep_var column text, e.g. "lambda_b" or "lambda_b@lambda_r=200".
    std::string label() const;
};

/// Parses "var=snr_db;values=-10:5:30;metric=sinr_cov;engines=analytic,montecarlo;
/// schemes=NomaRisHetNet,OmaRisHetNet;fixed=lambda_b:20,lambda_r:200".
/// values takes a comma list or start:step:stop. Only var and values are required.
SweepSpec parse_sweep(const std::string& text);

std::vector<std::string> preset_names();
/// A preset is one or more sweeps emitted into the same CSV.
std::vector<SweepSpec> preset(const std::string& name);

struct RunOptions {
    long realizations = 100000;
    std::uint64_t seed = 1;
    int jobs = 1;
    double region_radius = 0.0;
    coverage::CoverageOptions coverage;
};

struct Row {
    std::string sweep_var;
    double value = 0.0;
    std::string scheme;
    std::string engine;
    std::string metric;
    double estimate = 0.0;
    double stderr_ = 0.0;  // MC standard error; 0 for analytic rows
    double n_or_tol = 0.0;  // realizations, or the analytic error estimate
};

/// Rows in sweep order: value, then scheme, then engine, then metric.
/// Points run concurrently up to options.jobs; the result does not depend on it.
std::vector<Row> run_sweep(const SystemParams& base, const SweepSpec& spec, const RunOptions& options,
                           std::ostream* log = nullptr);

void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const std::vector<Row>& rows);

struct CompareLine {
    std::string quantity;
    double analytic = 0.0;
    double montecarlo = 0.0;
    double std_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CompareReport {
    MetricKind metric = MetricKind::Assoc;
    std::vector<CompareLine> lines;
    std::vector<std::pair<std::string, double>> notes;  // analytic-only extras
    bool pass() const;
};

/// Gap tolerances: assoc max(0.005, 3 stderr); sinr_cov 0.02; rate_cov 0.03.
CompareReport compare(const SystemParams& params, MetricKind metric, const RunOptions& options);
void print_report(std::ostream& out, const CompareReport& report);

}  // namespace riseval::experiment
