#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraq/fpfp.hpp"

namespace fraq {

/// Parses "1/3200" exactly (numerator/denominator) or a plain decimal.
double parse_fraction(const std::string& text);

/// Comma-separated list of fractions/decimals.
std::vector<double> parse_fraction_list(const std::string& text);

/// Flat `key = value` lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_config_text(std::istream& in);

/// Full experiment description for `convergence` and `bench`.
struct ExperimentConfig {
    std::vector<Scheme> schemes = {Scheme::BE};
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    double coupling_a = 0.0;
    int grid_m = 255;
    std::vector<double> taus;  // sorted descending
    double ref_tau = 0.0;
    double t_final = 1.0;
    InitialData initial = InitialData::poly_sin;
    KernelConfig kernel;
    std::string out_dir = ".";

    void validate() const;  // throws std::invalid_argument on bad setups
};

/// Defaults overridden by the config file, overridden by the command line.
ExperimentConfig resolve_config(const std::map<std::string, std::string>& file_opts,
                                const std::map<std::string, std::string>& cli_opts);

/// rate_k = ln(E_k / E_{k+1}) / ln 2 for adjacent tau halvings. A zero
/// error yields NaN (emitted blank in CSV). Throws if taus do not halve.
std::vector<double> compute_rates(const std::vector<std::pair<double, double>>& tau_and_error);

struct ConvergenceRow {
    double tau = 0.0;
    double e1 = 0.0, e2 = 0.0;
    double rate1 = 0.0, rate2 = 0.0;  // NaN on the first row
    double seconds = 0.0;
};

struct ConvergenceReport {
    Scheme scheme = Scheme::BE;
    std::vector<ConvergenceRow> rows;
    double ref_tau = 0.0;
    double ref_seconds = 0.0;
};

/// Runs the tau sweep for every scheme in the config against one shared
/// reference solution (fast variant of the family at ref_tau). Sweep
/// entries run in parallel worker threads capped by FRAQ_THREADS.
std::vector<ConvergenceReport> run_convergence(const ExperimentConfig& cfg);

struct BenchRow {
    std::string scheme;
    long n_steps = 0;
    double seconds_loop = 0.0;
    double seconds_setup = 0.0;
};

/// Wall-times the stepping loop per scheme and step count.
std::vector<BenchRow> timing_sweep(const ExperimentConfig& cfg,
                                   const std::vector<long>& step_counts);

// --- CSV emission (17 significant digits, exact round trip) ---

std::string format_double(double v);
void write_weights_csv(std::ostream& out, const WeightTable& t);
void write_kernel_error_csv(std::ostream& out, const KernelErrorReport& r);
void write_snapshot_csv(std::ostream& out, const ProblemSpec& spec, const StateField& f);
void write_convergence_csv(std::ostream& out, const ConvergenceReport& r);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Parses a CSV with a header line back into cells (round-trip tests).
std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// Worker-thread cap for sweeps: FRAQ_THREADS, else `fallback`.
int sweep_threads(int fallback);

}  // namespace fraq
