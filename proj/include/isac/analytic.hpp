#ifndef ISAC_ANALYTIC_HPP
#define ISAC_ANALYTIC_HPP

#include "isac/model.hpp"
#include "isac/numerics.hpp"

#include <complex>
#include <functional>
#include <limits>
#include <string>

namespace isac {

using Rule = QuadratureRule<double>;

/// Annulus [d_min, r_max] (metres) holding the interfering BSs; r_max may be +inf.
struct InterferenceRegion {
    double d_min = 50.0;
    double r_max = 250.0;
};

/// Receives diagnostics such as out-of-range raw probabilities. Default: ignored.
void set_warning_handler(std::function<void(const std::string&)> handler);

/// E[e^{-sI}] of I = sum_l P g_l (d_l / l)^-alpha over a PPP in the region,
/// with marks g_l ~ Gamma(kappa, beta_int).
double mgf_interference(double s, const NetworkConfig& cfg, double d_min, double r_max);
std::complex<double> mgf_interference(std::complex<double> s, const NetworkConfig& cfg, double d_min, double r_max);

/// Mass of the atom I = 0 (empty region).
double interference_void_probability(const NetworkConfig& cfg, const InterferenceRegion& region);
double interference_mean(const NetworkConfig& cfg, const InterferenceRegion& region);

double cdf_interference_euler(double x, const NetworkConfig& cfg, const InterferenceRegion& region = {},
                              const EulerInversionParams& params = {});
double cdf_interference_gilpelaez(double x, const NetworkConfig& cfg, const InterferenceRegion& region = {});

/// Unclamped dominant-interferer quadrature forms.
double coverage_prob_comm_raw(const NetworkConfig& cfg, const Rule& rule);
double coverage_prob_radar_raw(const NetworkConfig& cfg, const Rule& rule);

/// Same, clamped to [0, 1]; values outside by more than 1e-6 raise a warning.
double coverage_prob_comm(const NetworkConfig& cfg, const Rule& rule);
double coverage_prob_radar(const NetworkConfig& cfg, const Rule& rule);

/// lambda_b log2(1 + gamma) coverage, bit/s/Hz/m^2
double pse_comm(const NetworkConfig& cfg, const Rule& rule);
double pse_radar(const NetworkConfig& cfg, const Rule& rule);

struct EnergyEfficiency {
    double total = 0.0;
    double comm = 0.0;
    double radar = 0.0;
};

/// bandwidth (R_c + R_r) / P_T in bit/J, with the comm-only and radar-only parts.
EnergyEfficiency energy_efficiency(const NetworkConfig& cfg, const PowerModel& pm, const Rule& rule,
                                   bool comm = true, bool radar = true);

/// Coverage, PSE (bit/s/m^2) and EE for one configuration.
AnalysisResult analyze(const NetworkConfig& cfg, const PowerModel& pm, const Rule& rule);

/// Radar exponent coefficient b(rho) in normalized units, before division by lambda.
double radar_exponent_coefficient(const NetworkConfig& cfg, double rho);

/// sigma^2 l^alpha / P
double normalized_noise(const NetworkConfig& cfg);

} // namespace isac

#endif
