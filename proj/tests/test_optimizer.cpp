#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isac/numerics.hpp"
#include "isac/optimizer.hpp"

#include <cmath>

using namespace isac;

namespace {

NetworkConfig at_height(double h)
{
    NetworkConfig c;
    c.h_t = h;
    return c;
}

double relative_derivative(const ObjectiveCoefficients& c, double lambda, Mode mode)
{
    return objective_derivative(c, lambda, mode) * lambda / objective_ee(c, lambda, mode);
}

} // namespace

TEST_CASE("objective coefficient substitutions")
{
    NetworkConfig cfg;
    cfg.gamma_c_db = 0.0;
    cfg.gamma_r_db = 10.0 * std::log10(3.0);
    const auto c = objective_coefficients(cfg, PowerModel{});
    CHECK(c.a1 == doctest::Approx(2.0 * pi * std::exp(1.0)).epsilon(1e-14));
    CHECK(c.b5 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.a2.size() == static_cast<std::size_t>(cfg.kappa));
    double sum = 0.0;
    for (double v : c.a2)
        sum += v;
    CHECK(c.a3 == doctest::Approx(sum).epsilon(1e-15));
    CHECK(c.a1 > 0.0);
    CHECK(c.a3 > 0.0);
    CHECK(std::isfinite(c.b3));
    CHECK(std::isfinite(c.b4));
    CHECK(c.b1.size() == static_cast<std::size_t>(cfg.n_tx));
}

TEST_CASE("a3 increases with the decoding threshold")
{
    NetworkConfig cfg;
    double prev = 0.0;
    for (int i = 0; i < 10; ++i) {
        cfg.gamma_c_db = -5.0 + 2.0 * i;
        const double a3 = objective_coefficients(cfg, PowerModel{}).a3;
        CHECK(a3 > prev);
        prev = a3;
    }
}

TEST_CASE("comm-only closed form")
{
    ObjectiveCoefficients syn;
    syn.a3 = 2.0;
    syn.length_unit_m = 1.0;
    CHECK(optimal_density_comm_only(syn) == 0.5);
    syn.a3 = 0.0;
    CHECK_THROWS_AS(optimal_density_comm_only(syn), ParameterError);

    const auto c = objective_coefficients(NetworkConfig{}, PowerModel{});
    const double l = optimal_density_comm_only(c);
    CHECK(std::abs(relative_derivative(c, l, Mode::comm_only)) < 1e-10);
    CHECK(objective_ee(c, l, Mode::comm_only) >= objective_ee(c, 0.5 * l, Mode::comm_only));
    CHECK(objective_ee(c, l, Mode::comm_only) >= objective_ee(c, 2.0 * l, Mode::comm_only));

    const auto grid = log_grid(l / 4.0, l * 4.0, 600);
    const auto g = grid_search(NetworkConfig{}, PowerModel{}, grid, Mode::comm_only);
    CHECK(std::abs(g.lambda_star / l - 1.0) <= 0.005);
}

TEST_CASE("objective derivative matches finite differences")
{
    const auto c = objective_coefficients(NetworkConfig{}, PowerModel{});
    for (Mode m : {Mode::isac, Mode::comm_only, Mode::radar_only})
        for (double lam : {3e-6, 1e-5, 4e-5}) {
            const double h = 1e-6 * lam;
            const double fd = (objective_ee(c, lam + h, m) - objective_ee(c, lam - h, m)) / (2.0 * h);
            const double scale = objective_ee(c, lam, m) / lam;
            CHECK(std::abs(objective_derivative(c, lam, m) - fd) <= 1e-6 * scale);
        }
}

TEST_CASE("radar-only cubic roots")
{
    for (double h : {1.5, 50.0, 200.0}) {
        const auto c = objective_coefficients(at_height(h), PowerModel{});
        const auto r = optimal_density_radar_only(c, 4);
        for (const auto& root : r.roots) {
            const auto& p = root.branch == 1 ? r.branch1 : r.branch2;
            const double scale = std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]) + std::abs(p[3]);
            CHECK(root.residual < 1e-9 * scale);
        }
        CHECK(r.result.lambda_star > 0.0);
    }
}

TEST_CASE("radar-only optimum at 1.5 m is a local maximum and matches the grid")
{
    const NetworkConfig cfg;
    const auto c = objective_coefficients(cfg, PowerModel{});
    const auto r = optimal_density_radar_only(c, cfg.n_tx);
    const double l = r.result.lambda_star;
    CHECK(objective_ee(c, l, Mode::radar_only) >= objective_ee(c, 0.9 * l, Mode::radar_only));
    CHECK(objective_ee(c, l, Mode::radar_only) >= objective_ee(c, 1.1 * l, Mode::radar_only));
    const auto g = grid_search(cfg, PowerModel{}, log_grid(1e-8, 1e-2, 2000), Mode::radar_only);
    CHECK(std::abs(l / g.lambda_star - 1.0) <= 0.02);
}

TEST_CASE("radar-only solver without a usable root")
{
    const auto c = objective_coefficients(NetworkConfig{}, PowerModel{});
    CHECK_THROWS_AS(optimal_density_radar_only(c, 4, {1.0, 2.0}, false), AccuracyError);
    const auto r = optimal_density_radar_only(c, 4, {1.0, 2.0}, true);
    CHECK(r.result.method == Method::grid);
}

TEST_CASE("Newton with the radar branch disabled reproduces the closed form")
{
    const NetworkConfig cfg;
    NewtonOptions opt;
    opt.mode = Mode::comm_only;
    const auto c = objective_coefficients(cfg, PowerModel{});
    for (double l0 : {0.0, 2e-6, 5e-5}) {
        opt.lambda0 = l0;
        const auto res = optimize_density_newton(cfg, PowerModel{}, opt);
        CHECK(res.converged);
        CHECK(res.method == Method::newton);
        CHECK(res.lambda_star == doctest::Approx(optimal_density_comm_only(c)).epsilon(1e-8));
    }
}

TEST_CASE("Newton optimum agrees with a 200-point grid at 1.5 m")
{
    const NetworkConfig cfg;
    const auto res = optimize_density_newton(cfg, PowerModel{});
    CHECK(res.converged);
    CHECK(res.bracket.first <= res.lambda_star);
    CHECK(res.lambda_star <= res.bracket.second);
    CHECK(res.residual < 1e-10);
    const auto c = objective_coefficients(cfg, PowerModel{});
    CHECK(res.ee_star >= objective_ee(c, 0.99 * res.lambda_star));
    CHECK(res.ee_star >= objective_ee(c, 1.01 * res.lambda_star));
    const auto g = grid_search(cfg, PowerModel{}, log_grid(1e-8, 1e-2, 200));
    CHECK(std::abs(res.ee_star / g.ee_star - 1.0) <= 1e-3);
}

TEST_CASE("optimal density ordering across target altitudes")
{
    double lam[3];
    int i = 0;
    for (double h : {1.5, 50.0, 200.0}) {
        const auto cfg = at_height(h);
        const auto res = optimize_density_newton(cfg, PowerModel{});
        const auto c = objective_coefficients(cfg, PowerModel{});
        CHECK(res.lambda_star <= optimal_density_comm_only(c));
        lam[i++] = res.lambda_star;
    }
    CHECK(lam[2] < lam[0]);
    CHECK(mean_cell_radius(lam[0]) < mean_cell_radius(lam[1]));
    CHECK(mean_cell_radius(lam[1]) < mean_cell_radius(lam[2]));
}

TEST_CASE("Newton result does not depend on the starting point")
{
    for (double h : {1.5, 50.0, 200.0}) {
        NewtonOptions opt;
        const auto ref = optimize_density_newton(at_height(h), PowerModel{}, opt);
        for (double l0 : log_grid(2e-8, 5e-3, 5)) {
            opt.lambda0 = l0;
            const auto res = optimize_density_newton(at_height(h), PowerModel{}, opt);
            CHECK(res.lambda_star == doctest::Approx(ref.lambda_star).epsilon(1e-6));
        }
    }
}

TEST_CASE("comm-only optimum ignores the power model")
{
    const NetworkConfig cfg;
    PowerModel pm;
    const double base = optimal_density_comm_only(objective_coefficients(cfg, pm));
    pm.p_circ_dbm += 10.0 * std::log10(2.0);
    pm.p_tx_bar_dbm += 10.0 * std::log10(2.0);
    CHECK(optimal_density_comm_only(objective_coefficients(cfg, pm)) == base);
}

TEST_CASE("grid_search shape diagnostics")
{
    const std::vector<double> grid{1.0, 2.0, 3.0, 4.0};
    const auto flat = grid_search([](double) { return 5.0; }, grid);
    CHECK(flat.lambda_star == 1.0);
    CHECK(flat.unimodal);
    const auto bump = grid_search([](double x) { return -(x - 2.2) * (x - 2.2); }, grid);
    CHECK(bump.lambda_star == 2.0);
    CHECK(bump.unimodal);
    CHECK(bump.local_maxima == 1);
    const auto two = grid_search([](double x) { return std::cos(3.0 * x); }, log_grid(0.5, 5.0, 100));
    CHECK(!two.unimodal);
    CHECK(count_local_maxima({1.0, 3.0, 3.0, 1.0, 2.0}) == 2);
    CHECK(is_unimodal({1.0, 2.0, 2.0, 0.5}));
    CHECK(!is_unimodal({2.0, 1.0, 3.0}));
    CHECK(log_grid(1e-7, 1e-3, 5)[2] == doctest::Approx(1e-5).epsilon(1e-12));
}

TEST_CASE("objective is uni-modal in density at every altitude")
{
    for (double h : {1.5, 50.0, 200.0}) {
        const auto g = grid_search(at_height(h), PowerModel{}, log_grid(1e-7, 1e-3, 200));
        CHECK(g.unimodal);
    }
}

TEST_CASE("grid refinement keeps the argmax within one coarse cell")
{
    for (double h : {1.5, 50.0, 200.0}) {
        const auto coarse_grid = log_grid(1e-7, 1e-3, 50);
        const double cell = coarse_grid[1] / coarse_grid[0];
        const auto coarse = grid_search(at_height(h), PowerModel{}, coarse_grid);
        const auto fine = grid_search(at_height(h), PowerModel{}, log_grid(1e-7, 1e-3, 197));
        CHECK(std::abs(std::log(fine.lambda_star / coarse.lambda_star)) <= std::log(cell) * (1.0 + 1e-12));
    }
}
