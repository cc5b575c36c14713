#ifndef ISAC_OPTIMIZER_HPP
#define ISAC_OPTIMIZER_HPP

#include "isac/model.hpp"

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace isac {

enum class Method { newton, closed_form_comm, closed_form_radar_cubic, grid };
enum class Mode { isac, comm_only, radar_only };

const char* to_string(Method m);
const char* to_string(Mode m);

struct OptimizationResult {
    double lambda_star = 0.0;  // per m^2
    double ee_star = 0.0;      // bit/J
    Method method = Method::grid;
    int iterations = 0;
    bool converged = false;
    std::pair<double, double> bracket{1e-8, 1e-2};
    // |dEE/dlambda| lambda / EE at lambda_star
    double residual = 0.0;
    std::string diagnostics;
    // grid_search only
    bool unimodal = false;
    int local_maxima = 0;
};

/// First-order Laguerre objective (node r_1 = 1, weight H_1 = 1) in the
/// normalized density L = lambda l^2.
struct ObjectiveCoefficients {
    double a1 = 0.0;
    std::vector<double> a2;
    double a3 = 0.0;
    std::vector<double> b1;
    std::vector<double> b2;
    double b3 = 0.0;
    double b4 = 0.0;
    double b5 = 0.0;
    // bandwidth / per-BS power
    double ee_scale = 0.0;
    double length_unit_m = 1.0;
    int n_tx = 1;

    double to_normalized(double lambda) const { return lambda * length_unit_m * length_unit_m; }
    double to_density(double L) const { return L / (length_unit_m * length_unit_m); }
};

ObjectiveCoefficients objective_coefficients(const NetworkConfig& cfg, const PowerModel& pm);

/// Closed-form EE at density lambda (per m^2), clamped at 0.
double objective_ee(const ObjectiveCoefficients& c, double lambda, Mode mode = Mode::isac);
/// dEE/dlambda of the same objective.
double objective_derivative(const ObjectiveCoefficients& c, double lambda, Mode mode = Mode::isac);
/// Radar derivative as printed alongside the cubic reduction, for cross-checking only.
double published_radar_derivative(const ObjectiveCoefficients& c, double lambda);

/// 1 / a3, expressed per m^2.
double optimal_density_comm_only(const ObjectiveCoefficients& c);

struct CubicRoot {
    int branch = 0;          // 1: L < 1 reduction, 2: L > 1 reduction
    double lambda = 0.0;     // per m^2
    double normalized = 0.0; // L
    double residual = 0.0;
    double ee = 0.0;
    bool admissible = false;
    bool local_max = false;
};

struct RadarCubicResult {
    OptimizationResult result;
    std::vector<CubicRoot> roots;
    // cubic coefficients per branch, highest power first
    std::array<double, 4> branch1{};
    std::array<double, 4> branch2{};
};

RadarCubicResult optimal_density_radar_only(const ObjectiveCoefficients& c, int n_tx,
                                            std::pair<double, double> bracket = {1e-8, 1e-2},
                                            bool grid_fallback = true);

struct NewtonOptions {
    double lambda0 = 0.0; // 0 selects the comm-only optimum clipped into the bracket
    double tol = 1e-10;
    int max_iter = 200;
    std::pair<double, double> bracket{1e-8, 1e-2};
    Mode mode = Mode::isac;
};

OptimizationResult optimize_density_newton(const NetworkConfig& cfg, const PowerModel& pm,
                                           const NewtonOptions& opt = {});

/// Argmax over the grid plus shape diagnostics of the EE sequence.
OptimizationResult grid_search(const std::function<double(double)>& ee, const std::vector<double>& grid);
OptimizationResult grid_search(const NetworkConfig& cfg, const PowerModel& pm, const std::vector<double>& grid,
                               Mode mode = Mode::isac);

/// Count of local maxima after collapsing runs of equal values; endpoints count
/// when they exceed their single neighbour.
int count_local_maxima(const std::vector<double>& v);
/// At most one sign change of the successive differences, and only + to -.
bool is_unimodal(const std::vector<double>& v);

std::vector<double> log_grid(double lo, double hi, int n);

} // namespace isac

#endif
