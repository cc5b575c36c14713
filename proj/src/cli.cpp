#include "isac/cli.hpp"
#include "isac/analytic.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

namespace isac {

SweepVariable parse_sweep_variable(const std::string& s)
{
    if (s == "lambda_b") return SweepVariable::lambda_b;
    if (s == "gamma_joint") return SweepVariable::gamma_joint;
    if (s == "gamma_c") return SweepVariable::gamma_c;
    if (s == "gamma_r") return SweepVariable::gamma_r;
    if (s == "p_tx_dbm") return SweepVariable::p_tx_dbm;
    if (s == "h_t") return SweepVariable::h_t;
    if (s == "r_area") return SweepVariable::r_area;
    throw ParameterError("unknown sweep variable '" + s + "'");
}

const char* to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::lambda_b: return "lambda_b";
    case SweepVariable::gamma_joint: return "gamma_joint";
    case SweepVariable::gamma_c: return "gamma_c";
    case SweepVariable::gamma_r: return "gamma_r";
    case SweepVariable::p_tx_dbm: return "p_tx_dbm";
    case SweepVariable::h_t: return "h_t";
    case SweepVariable::r_area: return "r_area";
    }
    return "?";
}

void apply_sweep_value(Scenario& sc, SweepVariable var, double value)
{
    switch (var) {
    case SweepVariable::lambda_b:
        sc.cfg.lambda_b = value;
        sc.cfg.lambda_u = std::max(sc.cfg.lambda_u, 10.0 * value);
        break;
    case SweepVariable::gamma_joint:
        sc.cfg.gamma_c_db = value;
        sc.cfg.gamma_r_db = value;
        break;
    case SweepVariable::gamma_c: sc.cfg.gamma_c_db = value; break;
    case SweepVariable::gamma_r: sc.cfg.gamma_r_db = value; break;
    case SweepVariable::p_tx_dbm:
        sc.cfg.p_tx_dbm = value;
        sc.pm.p_tx_bar_dbm = value;
        break;
    case SweepVariable::h_t: sc.cfg.h_t = value; break;
    case SweepVariable::r_area: sc.cfg.r_area = value; break;
    }
}

namespace {

void check_spec(const SweepSpec& spec)
{
    if (spec.values.empty())
        throw ParameterError("sweep: no values");
    const bool up = spec.values.size() < 2 || spec.values[1] > spec.values[0];
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (up ? !(spec.values[i] > spec.values[i - 1]) : !(spec.values[i] < spec.values[i - 1]))
            throw ParameterError("sweep: values must be strictly monotone");
    if (spec.engines.count(Engine::montecarlo) && spec.trials < 100)
        throw ParameterError("sweep: montecarlo needs at least 100 trials");
}

} // namespace

void write_sweep(const Scenario& base, const SweepSpec& spec, std::ostream& out, const RunOptions& opt)
{
    check_spec(spec);
    const Rule rule = gauss_laguerre(opt.quad_order);
    const char* var = to_string(spec.variable);
    out << csv_header << '\n' << std::setprecision(10);

    std::vector<AnalysisResult> analytic(spec.values.size());
    if (spec.engines.count(Engine::analytic)) {
        std::vector<std::future<AnalysisResult>> jobs;
        for (double v : spec.values)
            jobs.push_back(std::async(std::launch::async, [&, v] {
                Scenario sc = base;
                apply_sweep_value(sc, spec.variable, v);
                validate(sc.cfg);
                return analyze(sc.cfg, sc.pm, rule);
            }));
        for (std::size_t i = 0; i < jobs.size(); ++i)
            analytic[i] = jobs[i].get();
    }

    std::ofstream records;
    if (!opt.records_path.empty() && spec.engines.count(Engine::montecarlo))
        records.open(opt.records_path);

    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        const double v = spec.values[i];
        if (spec.engines.count(Engine::analytic)) {
            const auto& r = analytic[i];
            out << var << ',' << v << ",analytic," << r.coverage_comm << ',' << r.coverage_radar << ','
                << r.pse_comm << ',' << r.pse_radar << ',' << r.ee << ",,,,\n";
        }
        if (spec.engines.count(Engine::montecarlo)) {
            Scenario sc = base;
            apply_sweep_value(sc, spec.variable, v);
            validate(sc.cfg);
            const auto m = estimate_metrics(sc.cfg, sc.pm, spec.trials, spec.seed, opt.workers,
                                            records.is_open() ? &records : nullptr);
            out << var << ',' << v << ",montecarlo," << m.coverage_comm.mean << ',' << m.coverage_radar.mean << ','
                << m.pse_comm.mean << ',' << m.pse_radar.mean << ',' << m.ee.mean << ',' << m.ee.ci_low << ','
                << m.ee.ci_high << ',' << spec.trials << ',' << spec.seed << '\n';
        }
    }
}

SweepSummary run_sweep(const Scenario& base, const SweepSpec& spec, const std::string& output_path,
                       const RunOptions& opt)
{
    SweepSummary s;
    try {
        std::ofstream out(output_path, std::ios::binary);
        if (!out)
            throw ParameterError("cannot write '" + output_path + "'");
        write_sweep(base, spec, out, opt);
        out.close();
        if (!out)
            throw ParameterError("write to '" + output_path + "' failed");
    } catch (...) {
        std::remove(output_path.c_str());
        throw;
    }
    s.rows = spec.values.size() * spec.engines.size();
    return s;
}

OptimizeReport run_optimize(const Scenario& sc, Mode mode)
{
    OptimizeReport rep;
    const ObjectiveCoefficients c = objective_coefficients(sc.cfg, sc.pm);
    if (mode == Mode::comm_only) {
        rep.result = OptimizationResult{};
        rep.result.lambda_star = optimal_density_comm_only(c);
        rep.result.ee_star = objective_ee(c, rep.result.lambda_star, Mode::comm_only);
        rep.result.method = Method::closed_form_comm;
        rep.result.converged = true;
        const double d = objective_derivative(c, rep.result.lambda_star, Mode::comm_only);
        rep.result.residual = std::abs(d) * rep.result.lambda_star / rep.result.ee_star;
    } else if (mode == Mode::radar_only) {
        auto cube = optimal_density_radar_only(c, sc.cfg.n_tx);
        rep.result = cube.result;
        rep.cubic_roots = cube.roots;
    } else {
        NewtonOptions opt;
        opt.mode = Mode::isac;
        rep.result = optimize_density_newton(sc.cfg, sc.pm, opt);
    }
    rep.radius_m = mean_cell_radius(rep.result.lambda_star);
    return rep;
}

void write_optimize(const OptimizeReport& rep, Mode mode, std::ostream& out)
{
    const auto& r = rep.result;
    out << std::setprecision(10);
    out << "mode=" << to_string(mode) << '\n'
        << "lambda_star=" << r.lambda_star << '\n'
        << "ee_star=" << r.ee_star << '\n'
        << "cell_radius_m=" << rep.radius_m << '\n'
        << "method=" << to_string(r.method) << '\n'
        << "iterations=" << r.iterations << '\n'
        << "converged=" << (r.converged ? 1 : 0) << '\n'
        << "residual=" << r.residual << '\n';
    if (!r.diagnostics.empty())
        out << "diagnostics=" << r.diagnostics << '\n';
    for (std::size_t i = 0; i < rep.cubic_roots.size(); ++i) {
        const auto& c = rep.cubic_roots[i];
        out << "cubic_root." << i << "=branch:" << c.branch << " lambda:" << c.lambda << " residual:" << c.residual
            << " admissible:" << c.admissible << " local_max:" << c.local_max << " ee:" << c.ee << '\n';
    }
}

ValidationReport run_validate(const Scenario& sc, long trials, std::uint64_t seed, const RunOptions& opt)
{
    ValidationReport rep;
    rep.insufficient_trials = trials < 10000;
    const Rule rule = gauss_laguerre(opt.quad_order);
    const AnalysisResult a = analyze(sc.cfg, sc.pm, rule);
    std::ofstream records;
    if (!opt.records_path.empty())
        records.open(opt.records_path);
    const MetricsEstimate m = estimate_metrics(sc.cfg, sc.pm, trials, seed, opt.workers,
                                               records.is_open() ? &records : nullptr);

    auto line = [](const char* name, double analytic, const SnapshotEstimate& e) {
        ValidationLine l{name, analytic, e, false};
        const double lo = e.ci_low - 0.1 * std::abs(e.ci_low);
        const double hi = e.ci_high + 0.1 * std::abs(e.ci_high);
        l.pass = analytic >= lo && analytic <= hi;
        return l;
    };
    rep.lines.push_back(line("coverage_comm", a.coverage_comm, m.coverage_comm));
    rep.lines.push_back(line("coverage_radar", a.coverage_radar, m.coverage_radar));
    rep.lines.push_back(line("pse_comm", a.pse_comm, m.pse_comm));
    rep.lines.push_back(line("pse_radar", a.pse_radar, m.pse_radar));
    rep.lines.push_back(line("ee", a.ee, m.ee));
    rep.pass = true;
    for (const auto& l : rep.lines)
        rep.pass = rep.pass && l.pass;
    return rep;
}

void write_validate(const ValidationReport& rep, std::ostream& out)
{
    out << std::setprecision(6);
    if (rep.insufficient_trials)
        out << "warning: fewer than 10000 trials, confidence intervals are too wide for validation\n";
    out << "metric,analytic,mc_mean,mc_ci_low,mc_ci_high,trials,seed,status\n";
    for (const auto& l : rep.lines)
        out << l.metric << ',' << l.analytic << ',' << l.mc.mean << ',' << l.mc.ci_low << ',' << l.mc.ci_high << ','
            << l.mc.trials << ',' << l.mc.seed << ',' << (l.pass ? "pass" : "FAIL") << '\n';
    out << "overall," << (rep.pass ? "pass" : "FAIL") << '\n';
}

void write_analysis(const Scenario& sc, const AnalysisResult& r, int quad_order, std::ostream& out)
{
    out << std::setprecision(10);
    out << "quad_order=" << quad_order << '\n'
        << "lambda_b=" << sc.cfg.lambda_b << '\n'
        << "coverage_comm=" << r.coverage_comm << '\n'
        << "coverage_radar=" << r.coverage_radar << '\n'
        << "pse_comm=" << r.pse_comm << '\n'
        << "pse_radar=" << r.pse_radar << '\n'
        << "ee=" << r.ee << '\n'
        << "ee_comm=" << r.ee_comm << '\n'
        << "ee_radar=" << r.ee_radar << '\n';
}

void write_simulation(const MetricsEstimate& m, std::ostream& out)
{
    out << std::setprecision(10);
    auto row = [&](const char* name, const SnapshotEstimate& e) {
        out << name << '=' << e.mean << " ci=[" << e.ci_low << ", " << e.ci_high << "] trials=" << e.trials
            << " seed=" << e.seed << '\n';
    };
    row("coverage_comm", m.coverage_comm);
    row("coverage_radar", m.coverage_radar);
    row("pse_comm", m.pse_comm);
    row("pse_radar", m.pse_radar);
    row("ee", m.ee);
    out << "max_zf_residual=" << m.max_zf_residual << '\n' << "max_mvdr_residual=" << m.max_mvdr_residual << '\n';
}

} // namespace isac
