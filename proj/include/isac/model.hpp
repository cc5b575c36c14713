#ifndef ISAC_MODEL_HPP
#define ISAC_MODEL_HPP

#include <cmath>
#include <istream>
#include <string>

namespace isac {

inline constexpr double pi = 3.14159265358979323846;

double dbm_to_watt(double x_dbm);
double watt_to_dbm(double x_w);
double db_to_linear(double x_db);

/// 1 / sqrt(pi lambda_b)
double mean_cell_radius(double lambda_b);

/// -174 dBm/Hz + 10 log10(bandwidth) + noise figure
double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db = 9.0);

struct NetworkConfig {
    double lambda_b = 1e-5;
    double lambda_u = 1e-4;
    double lambda_r = 1e-5;
    int n_tx = 4;
    int n_rx = 8;
    double alpha = 2.7;
    double p_tx_dbm = 43.0;
    double noise_dbm = thermal_noise_dbm(20e6);
    double gamma_c_db = 2.0;
    double gamma_r_db = 2.0;
    double h_t = 1.5;
    double h_bs = 25.0;
    double h_ue = 1.5;
    double r_area = 250.0;
    double bandwidth_hz = 20e6;
    int kappa = 4;
    double beta_int = 1.0;
    double rcs = 1.0;
    double r_ref = mean_cell_radius(1e-5);

    // reference distance of the (d / l)^-alpha path-loss law and of the quadrature nodes
    double length_unit_m = 100.0;
    // radar exponents; values <= 0 select 2 alpha and alpha
    double alpha_r = 0.0;
    double alpha_bar = 0.0;
    // radar nodes mapped to r = h_t + r_n in the analytic engine
    bool radar_shift_domain = true;
    // same choice for the first-order optimizer objective
    bool objective_shift_domain = false;
    bool radar_alternating_sign = false;
    bool radar_include_tx_power = false;
    bool guard_annulus = true;
    bool matched_beam = false;

    double alpha_r_eff() const { return alpha_r > 0.0 ? alpha_r : 2.0 * alpha; }
    double alpha_bar_eff() const { return alpha_bar > 0.0 ? alpha_bar : alpha; }
    double gamma_c() const { return db_to_linear(gamma_c_db); }
    double gamma_r() const { return db_to_linear(gamma_r_db); }
    double p_tx() const { return dbm_to_watt(p_tx_dbm); }
    double noise() const { return dbm_to_watt(noise_dbm); }
};

struct PowerModel {
    double p_tx_bar_dbm = 43.0;
    double eta_eff = 0.5;
    double p_circ_dbm = 51.14;

    /// P_tx_bar / eta + P_circ in W
    double per_bs_watt() const;
};

struct AnalysisResult {
    double pse_comm = 0.0;
    double pse_radar = 0.0;
    double ee = 0.0;
    double coverage_comm = 0.0;
    double coverage_radar = 0.0;
    double ee_comm = 0.0;
    double ee_radar = 0.0;
};

/// Throws ParameterError when an invariant of the configuration is violated.
void validate(const NetworkConfig& cfg);
void validate(const PowerModel& pm);

/// lambda_b (P_tx_bar / eta + P_circ), W/m^2
double network_power_density(const NetworkConfig& cfg, const PowerModel& pm);

struct Scenario {
    NetworkConfig cfg;
    PowerModel pm;
};

/// Flat key = value text; '#' starts a comment. Unknown keys and malformed
/// lines raise ParameterError with the offending line number. When r_ref is
/// not given it is pinned to mean_cell_radius(lambda_b) of the file.
Scenario parse_config(std::istream& in);
Scenario load_config(const std::string& path);

/// Applies one key = value assignment; returns false for an unknown key.
bool set_field(Scenario& sc, const std::string& key, const std::string& value);

} // namespace isac

#endif
