#include "isac/analytic.hpp"

#include <algorithm>
#include <mutex>

namespace isac {

namespace {

std::mutex warn_mutex;
std::function<void(const std::string&)> warn_handler;

void warn(const std::string& msg)
{
    std::lock_guard<std::mutex> lock(warn_mutex);
    if (warn_handler)
        warn_handler(msg);
}

double clamp_probability(double raw, const char* what)
{
    if (raw < -1e-6 || raw > 1.0 + 1e-6)
        warn(std::string(what) + ": raw value " + std::to_string(raw) + " clamped to [0, 1]");
    return std::clamp(raw, 0.0, 1.0);
}

double factorial(int n)
{
    double f = 1.0;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

template <typename T>
T log_mgf(T s, const NetworkConfig& cfg, double d_min, double r_max)
{
    const double ell = cfg.length_unit_m;
    const double lam = cfg.lambda_b * ell * ell;
    if (lam == 0.0)
        return T(0);
    const double a = cfg.kappa, b = -2.0 / cfg.alpha, c = 1.0 - 2.0 / cfg.alpha;
    const T scale = s * cfg.p_tx() * cfg.beta_int;
    const double d = d_min / ell;

    // x^2 (1 - 2F1(...)) evaluated at one radius, zero in the r -> inf limit
    auto edge = [&](double x) -> T {
        if (std::isinf(x))
            return T(0);
        const T z = -scale * std::pow(x, -cfg.alpha);
        return x * x * (T(1) - gauss_2f1(a, b, c, z));
    };
    return -pi * lam * (edge(r_max / ell) - edge(d));
}

} // namespace

void set_warning_handler(std::function<void(const std::string&)> handler)
{
    std::lock_guard<std::mutex> lock(warn_mutex);
    warn_handler = std::move(handler);
}

double mgf_interference(double s, const NetworkConfig& cfg, double d_min, double r_max)
{
    if (!(cfg.alpha > 2.0))
        throw ParameterError("mgf_interference: alpha must exceed 2");
    if (!(d_min > 0.0) || !(r_max > d_min))
        throw ParameterError("mgf_interference: need 0 < d_min < r_max");
    if (s == 0.0)
        return 1.0;
    return std::exp(log_mgf(s, cfg, d_min, r_max));
}

std::complex<double> mgf_interference(std::complex<double> s, const NetworkConfig& cfg, double d_min, double r_max)
{
    if (!(cfg.alpha > 2.0))
        throw ParameterError("mgf_interference: alpha must exceed 2");
    if (!(d_min > 0.0) || !(r_max > d_min))
        throw ParameterError("mgf_interference: need 0 < d_min < r_max");
    if (s == 0.0)
        return 1.0;
    return std::exp(log_mgf(s, cfg, d_min, r_max));
}

double interference_void_probability(const NetworkConfig& cfg, const InterferenceRegion& region)
{
    if (std::isinf(region.r_max))
        return cfg.lambda_b > 0.0 ? 0.0 : 1.0;
    return std::exp(-pi * cfg.lambda_b * (region.r_max * region.r_max - region.d_min * region.d_min));
}

double interference_mean(const NetworkConfig& cfg, const InterferenceRegion& region)
{
    const double ell = cfg.length_unit_m;
    const double lam = cfg.lambda_b * ell * ell;
    const double e = 2.0 - cfg.alpha;
    const double outer = std::isinf(region.r_max) ? 0.0 : std::pow(region.r_max / ell, e);
    return 2.0 * pi * lam * cfg.p_tx() * cfg.kappa * cfg.beta_int * (std::pow(region.d_min / ell, e) - outer)
        / (cfg.alpha - 2.0);
}

double cdf_interference_euler(double x, const NetworkConfig& cfg, const InterferenceRegion& region,
                              const EulerInversionParams& params)
{
    if (!(x > 0.0))
        throw ParameterError("cdf_interference_euler: x must be positive");
    if (cfg.lambda_b == 0.0)
        return 1.0;

    using C = std::complex<double>;
    const double A = params.A;
    const int terms = params.N + params.Q;
    std::vector<double> partial(terms + 2);

    // partial sums of the alternating Bromwich series of M(s)/s
    double acc = 0.0;
    for (int n = 0; n <= terms + 1; ++n) {
        const C s((A) / (2.0 * x), pi * n / x);
        const double re = (mgf_interference(s, cfg, region.d_min, region.r_max) / s).real();
        acc += (n % 2 == 0 ? 1.0 : -1.0) * re / (n == 0 ? 2.0 : 1.0);
        partial[n] = acc;
    }

    auto euler = [&](int N) {
        double sum = 0.0, binom = 1.0;
        for (int q = 0; q <= params.Q; ++q) {
            sum += binom * partial[N + q];
            binom *= double(params.Q - q) / (q + 1);
        }
        return std::exp(A / 2.0) / x * std::ldexp(sum, -params.Q);
    };

    const double value = euler(params.N);
    const double remainder = std::abs(value - euler(params.N + 1)) + std::exp(-A) / (1.0 - std::exp(-A));
    if (remainder > 1e-6)
        throw AccuracyError("cdf_interference_euler: estimated remainder " + std::to_string(remainder)
                            + " exceeds 1e-6");
    return std::clamp(value, 0.0, 1.0);
}

double cdf_interference_gilpelaez(double x, const NetworkConfig& cfg, const InterferenceRegion& region)
{
    if (!(x > 0.0))
        throw ParameterError("cdf_interference_gilpelaez: x must be positive");
    if (cfg.lambda_b == 0.0)
        return 1.0;

    using C = std::complex<double>;
    const double p0 = interference_void_probability(cfg, region);
    auto integrand = [&](double t) {
        if (t == 0.0)
            t = 1e-300;
        const C phi = mgf_interference(C(0.0, -t), cfg, region.d_min, region.r_max) - p0;
        return (std::exp(C(0.0, -t * x)) * phi).imag() / t;
    };

    const double width = pi / std::max(x, interference_mean(cfg, region));
    double total = 0.0;
    int quiet = 0;
    for (int block = 0; block < 200000; ++block) {
        const double lo = block * width;
        const double part = integrate_adaptive(integrand, lo, lo + width, 1e-13, 1e-11);
        total += part;
        quiet = std::abs(part) < 1e-11 ? quiet + 1 : 0;
        if (quiet >= 8)
            return std::clamp(0.5 + 0.5 * p0 - total / pi, 0.0, 1.0);
    }
    throw AccuracyError("cdf_interference_gilpelaez: oscillatory integral did not converge");
}

double normalized_noise(const NetworkConfig& cfg)
{
    return cfg.noise() * std::pow(cfg.length_unit_m, cfg.alpha) / cfg.p_tx();
}

double coverage_prob_comm_raw(const NetworkConfig& cfg, const Rule& rule)
{
    const double ell = cfg.length_unit_m;
    const double lam = cfg.lambda_b * ell * ell;
    if (lam == 0.0)
        return 0.0;
    const double a = cfg.alpha, g = cfg.gamma_c(), beta = cfg.beta_int;
    const double noise = normalized_noise(cfg);

    double total = 0.0;
    for (int i = 0; i < rule.order(); ++i) {
        const double r = rule.nodes(i);
        const double t = std::pow(r, -a) / g - noise;
        if (t <= 0.0)
            continue;
        const double bt = beta * t;
        double expo = 0.0;
        for (int k = 0; k < cfg.kappa; ++k) {
            expo += 2.0 * pi * lam / (a * factorial(k)) * std::pow(bt, -2.0 / a)
                * upper_incomplete_gamma((k + 2.0) / a, bt);
            expo += pi * lam * r * r / cfg.kappa;
        }
        total += std::exp(std::log(rule.weights(i)) + r + std::log(r) - expo);
    }
    return 2.0 * pi * lam * total;
}

double radar_exponent_coefficient(const NetworkConfig& cfg, double rho)
{
    const int N = cfg.n_tx;
    const double a = cfg.alpha;
    const double x_ref = cfg.r_ref / cfg.length_unit_m;
    const double power = cfg.radar_include_tx_power ? cfg.p_tx() : 1.0;
    return cfg.alpha_bar_eff() * (N - 1) * (a - 2.0) * power * cfg.rcs * std::pow(rho, -cfg.alpha_r_eff())
        / (2.0 * pi * cfg.beta_int * std::pow(x_ref, 2.0 - a) * cfg.gamma_r());
}

double coverage_prob_radar_raw(const NetworkConfig& cfg, const Rule& rule)
{
    const double ell = cfg.length_unit_m;
    const double lam = cfg.lambda_b * ell * ell;
    if (lam == 0.0)
        return 0.0;
    const double h = cfg.h_t / ell;
    const int N = cfg.n_tx;
    const double sign = cfg.radar_alternating_sign ? -1.0 : 1.0;

    double outage = 0.0;
    for (int n = 0; n < rule.order(); ++n) {
        const double u = rule.nodes(n);
        const double rho = cfg.radar_shift_domain ? h + u : u;
        const double y = radar_exponent_coefficient(cfg, rho) / lam;
        double series = 0.0, term = 1.0;
        for (int i = 0; i < N; ++i) {
            series += term;
            term *= sign * y / (i + 1);
        }
        const double log_mag = std::log(rule.weights(n)) + u + std::log(rho) - y
            - 2.0 * pi * lam * (rho * rho - h * h);
        outage += 4.0 * pi * lam * series * std::exp(log_mag);
    }
    return 1.0 - outage;
}

double coverage_prob_comm(const NetworkConfig& cfg, const Rule& rule)
{
    return clamp_probability(coverage_prob_comm_raw(cfg, rule), "coverage_prob_comm");
}

double coverage_prob_radar(const NetworkConfig& cfg, const Rule& rule)
{
    return clamp_probability(coverage_prob_radar_raw(cfg, rule), "coverage_prob_radar");
}

double pse_comm(const NetworkConfig& cfg, const Rule& rule)
{
    if (cfg.lambda_b == 0.0)
        return 0.0;
    return cfg.lambda_b * std::log2(1.0 + cfg.gamma_c()) * coverage_prob_comm(cfg, rule);
}

double pse_radar(const NetworkConfig& cfg, const Rule& rule)
{
    if (cfg.lambda_b == 0.0)
        return 0.0;
    return cfg.lambda_b * std::log2(1.0 + cfg.gamma_r()) * coverage_prob_radar(cfg, rule);
}

EnergyEfficiency energy_efficiency(const NetworkConfig& cfg, const PowerModel& pm, const Rule& rule, bool comm,
                                   bool radar)
{
    if (!(cfg.lambda_b > 0.0))
        throw ParameterError("energy_efficiency: lambda_b must be positive");
    const double pt = network_power_density(cfg, pm);
    EnergyEfficiency ee;
    if (comm)
        ee.comm = cfg.bandwidth_hz * pse_comm(cfg, rule) / pt;
    if (radar)
        ee.radar = cfg.bandwidth_hz * pse_radar(cfg, rule) / pt;
    ee.total = ee.comm + ee.radar;
    return ee;
}

AnalysisResult analyze(const NetworkConfig& cfg, const PowerModel& pm, const Rule& rule)
{
    AnalysisResult res;
    res.coverage_comm = coverage_prob_comm(cfg, rule);
    res.coverage_radar = coverage_prob_radar(cfg, rule);
    res.pse_comm = cfg.bandwidth_hz * cfg.lambda_b * std::log2(1.0 + cfg.gamma_c()) * res.coverage_comm;
    res.pse_radar = cfg.bandwidth_hz * cfg.lambda_b * std::log2(1.0 + cfg.gamma_r()) * res.coverage_radar;
    if (cfg.lambda_b > 0.0) {
        const double pt = network_power_density(cfg, pm);
        res.ee_comm = res.pse_comm / pt;
        res.ee_radar = res.pse_radar / pt;
        res.ee = res.ee_comm + res.ee_radar;
    }
    return res;
}

} // namespace isac
