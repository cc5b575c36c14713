#ifndef ISAC_CLI_HPP
#define ISAC_CLI_HPP

#include "isac/model.hpp"
#include "isac/montecarlo.hpp"
#include "isac/optimizer.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace isac {

enum class SweepVariable { lambda_b, gamma_joint, gamma_c, gamma_r, p_tx_dbm, h_t, r_area };
enum class Engine { analytic, montecarlo };

SweepVariable parse_sweep_variable(const std::string& s);
const char* to_string(SweepVariable v);

struct SweepSpec {
    SweepVariable variable = SweepVariable::lambda_b;
    std::vector<double> values;
    std::set<Engine> engines{Engine::analytic};
    long trials = 10000;
    std::uint64_t seed = 1;
};

struct RunOptions {
    int quad_order = 20;
    int workers = 0;
    // per-snapshot SINR records of Monte Carlo runs; empty disables
    std::string records_path;
};

inline constexpr const char* csv_header =
    "sweep_var,value,engine,coverage_comm,coverage_radar,pse_comm,pse_radar,ee,ci_low,ci_high,trials,seed";

/// Applies one sweep value; p_tx_dbm moves the radiated power and the power draw together.
void apply_sweep_value(Scenario& sc, SweepVariable var, double value);

struct SweepSummary {
    std::size_t rows = 0;
};

/// Runs the sweep and writes CSV; on failure the partial file is removed.
SweepSummary run_sweep(const Scenario& base, const SweepSpec& spec, const std::string& output_path,
                       const RunOptions& opt = {});
void write_sweep(const Scenario& base, const SweepSpec& spec, std::ostream& out, const RunOptions& opt = {});

struct OptimizeReport {
    OptimizationResult result;
    double radius_m = 0.0;
    std::vector<CubicRoot> cubic_roots;
};

OptimizeReport run_optimize(const Scenario& sc, Mode mode);
void write_optimize(const OptimizeReport& rep, Mode mode, std::ostream& out);

struct ValidationLine {
    std::string metric;
    double analytic = 0.0;
    SnapshotEstimate mc;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationLine> lines;
    bool insufficient_trials = false;
    bool pass = false;
};

/// Analytic values must fall inside the MC 95% CI widened by 10% relative.
ValidationReport run_validate(const Scenario& sc, long trials, std::uint64_t seed, const RunOptions& opt = {});
void write_validate(const ValidationReport& rep, std::ostream& out);

void write_analysis(const Scenario& sc, const AnalysisResult& r, int quad_order, std::ostream& out);
void write_simulation(const MetricsEstimate& m, std::ostream& out);

} // namespace isac

#endif
