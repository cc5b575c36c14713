#include "isac/analytic.hpp"
#include "isac/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

struct Common {
    std::string config;
    std::string out;
    long trials = 100000;
    std::uint64_t seed = 1;
    std::string engine = "analytic";
    std::string mode = "isac";
    int quad_order = 20;
    int workers = 0;
    std::string records;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config, "key = value scenario file (defaults when omitted)");
    app->add_option("--out", c.out, "output file (stdout when omitted)");
    app->add_option("--trials", c.trials, "Monte Carlo snapshots");
    app->add_option("--seed", c.seed, "Monte Carlo seed");
    app->add_option("--engine", c.engine, "analytic | mc | both")->check(CLI::IsMember({"analytic", "mc", "both"}));
    app->add_option("--mode", c.mode, "isac | comm | radar")->check(CLI::IsMember({"isac", "comm", "radar"}));
    app->add_option("--quad-order", c.quad_order, "Gauss-Laguerre order of the analytic engine")
        ->check(CLI::Range(1, 64));
    app->add_option("--workers", c.workers, "worker threads (0 = all cores)");
    app->add_option("--records", c.records, "per-snapshot SINR CSV");
}

isac::Scenario scenario(const Common& c)
{
    if (c.config.empty())
        return isac::Scenario{};
    return isac::load_config(c.config);
}

isac::Mode mode_of(const std::string& m)
{
    if (m == "comm")
        return isac::Mode::comm_only;
    if (m == "radar")
        return isac::Mode::radar_only;
    return isac::Mode::isac;
}

// stdout or a file that is deleted again when the command fails
struct Output {
    explicit Output(const std::string& path) : path(path)
    {
        if (!path.empty()) {
            file = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file)
                throw isac::ParameterError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file ? *file : std::cout; }
    void discard()
    {
        if (file) {
            file.reset();
            std::remove(path.c_str());
        }
    }
    std::string path;
    std::unique_ptr<std::ofstream> file;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ISAC network planner: coverage, energy efficiency and optimal BS density"};
    app.require_subcommand(1);

    Common c;
    auto* analyze = app.add_subcommand("analyze", "closed-form coverage, PSE and EE");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates");
    auto* optimize = app.add_subcommand("optimize", "EE-maximizing BS density");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    auto* validate = app.add_subcommand("validate", "analytic vs Monte Carlo report");
    for (auto* s : {analyze, simulate, optimize, sweep, validate})
        add_common(s, c);

    std::string var = "lambda_b";
    double from = 1e-7, to = 1e-3;
    int points = 50;
    bool linear = false;
    sweep->add_option("--var", var, "lambda_b | gamma_joint | gamma_c | gamma_r | p_tx_dbm | h_t | r_area");
    sweep->add_option("--from", from, "first sweep value");
    sweep->add_option("--to", to, "last sweep value");
    sweep->add_option("--points", points, "number of sweep values")->check(CLI::PositiveNumber);
    sweep->add_flag("--linear", linear, "linear spacing (default logarithmic for lambda_b)");

    CLI11_PARSE(app, argc, argv);

    isac::set_warning_handler([](const std::string& m) { std::cerr << "warning: " << m << '\n'; });

    std::unique_ptr<Output> out;
    try {
        const isac::Scenario sc = scenario(c);
        out = std::make_unique<Output>(c.out);
        isac::RunOptions opt;
        opt.quad_order = c.quad_order;
        opt.workers = c.workers;
        opt.records_path = c.records;
        int status = 0;

        if (*analyze) {
            const auto r = isac::analyze(sc.cfg, sc.pm, isac::gauss_laguerre(c.quad_order));
            isac::write_analysis(sc, r, c.quad_order, out->stream());
        } else if (*simulate) {
            std::unique_ptr<std::ofstream> rec;
            if (!c.records.empty())
                rec = std::make_unique<std::ofstream>(c.records);
            const auto m = isac::estimate_metrics(sc.cfg, sc.pm, c.trials, c.seed, c.workers, rec.get());
            isac::write_simulation(m, out->stream());
        } else if (*optimize) {
            const auto mode = mode_of(c.mode);
            const auto rep = isac::run_optimize(sc, mode);
            isac::write_optimize(rep, mode, out->stream());
            status = rep.result.converged ? 0 : 2;
        } else if (*sweep) {
            isac::SweepSpec spec;
            spec.variable = isac::parse_sweep_variable(var);
            spec.trials = c.trials;
            spec.seed = c.seed;
            spec.engines.clear();
            if (c.engine != "mc")
                spec.engines.insert(isac::Engine::analytic);
            if (c.engine != "analytic")
                spec.engines.insert(isac::Engine::montecarlo);
            const bool log_spaced = !linear && spec.variable == isac::SweepVariable::lambda_b;
            if (log_spaced) {
                spec.values = isac::log_grid(from, to, points);
            } else {
                for (int i = 0; i < points; ++i)
                    spec.values.push_back(points == 1 ? from : from + (to - from) * i / (points - 1));
            }
            isac::write_sweep(sc, spec, out->stream(), opt);
        } else if (*validate) {
            const auto rep = isac::run_validate(sc, c.trials, c.seed, opt);
            isac::write_validate(rep, out->stream());
            status = rep.pass ? 0 : 1;
        }
        return status;
    } catch (const std::exception& e) {
        if (out)
            out->discard();
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
