#include "isac/model.hpp"
#include "isac/numerics.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace isac {

double dbm_to_watt(double x_dbm) { return std::pow(10.0, (x_dbm - 30.0) / 10.0); }

double watt_to_dbm(double x_w) { return 10.0 * std::log10(x_w) + 30.0; }

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double mean_cell_radius(double lambda_b)
{
    if (!(lambda_b > 0.0))
        throw ParameterError("mean_cell_radius: lambda_b must be positive");
    return 1.0 / std::sqrt(pi * lambda_b);
}

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db)
{
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double PowerModel::per_bs_watt() const { return dbm_to_watt(p_tx_bar_dbm) / eta_eff + dbm_to_watt(p_circ_dbm); }

void validate(const NetworkConfig& c)
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ParameterError(std::string("config: ") + what);
    };
    require(c.lambda_b >= 0.0 && c.lambda_u >= 0.0 && c.lambda_r >= 0.0, "densities must be nonnegative");
    require(c.lambda_u >= 10.0 * c.lambda_b, "lambda_u must be at least 10 lambda_b");
    require(c.n_tx >= 1 && c.n_tx < c.n_rx, "need 1 <= n_tx < n_rx");
    require(c.alpha > 2.0, "alpha must exceed 2");
    require(c.kappa >= 1 && c.kappa <= c.n_tx, "kappa must lie in [1, n_tx]");
    require(c.beta_int > 0.0, "beta_int must be positive");
    require(c.rcs > 0.0, "rcs must be positive");
    require(c.r_ref > 0.0, "r_ref must be positive");
    require(c.h_t >= 0.0 && c.h_bs >= 0.0 && c.h_ue >= 0.0, "heights must be nonnegative");
    require(c.r_area > 0.0, "r_area must be positive");
    require(c.bandwidth_hz > 0.0, "bandwidth_hz must be positive");
    require(c.length_unit_m > 0.0, "length_unit_m must be positive");
}

void validate(const PowerModel& pm)
{
    if (!(pm.eta_eff > 0.0 && pm.eta_eff <= 1.0))
        throw ParameterError("config: eta_eff must lie in (0, 1]");
    if (!(pm.per_bs_watt() > 0.0))
        throw ParameterError("config: per-BS power must be positive");
}

double network_power_density(const NetworkConfig& cfg, const PowerModel& pm)
{
    return cfg.lambda_b * pm.per_bs_watt();
}

namespace {

double to_double(const std::string& v)
{
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw ParameterError("not a number: '" + v + "'");
    return out;
}

int to_int(const std::string& v)
{
    int out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw ParameterError("not an integer: '" + v + "'");
    return out;
}

bool to_bool(const std::string& v)
{
    if (v == "1" || v == "true" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "off")
        return false;
    throw ParameterError("not a boolean: '" + v + "'");
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

using Setter = std::function<void(Scenario&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto real = [&t](const char* k, double NetworkConfig::*m) {
            t[k] = [m](Scenario& s, const std::string& v) { s.cfg.*m = to_double(v); };
        };
        auto integer = [&t](const char* k, int NetworkConfig::*m) {
            t[k] = [m](Scenario& s, const std::string& v) { s.cfg.*m = to_int(v); };
        };
        auto flag = [&t](const char* k, bool NetworkConfig::*m) {
            t[k] = [m](Scenario& s, const std::string& v) { s.cfg.*m = to_bool(v); };
        };
        auto power = [&t](const char* k, double PowerModel::*m) {
            t[k] = [m](Scenario& s, const std::string& v) { s.pm.*m = to_double(v); };
        };
        real("lambda_b", &NetworkConfig::lambda_b);
        real("lambda_u", &NetworkConfig::lambda_u);
        real("lambda_r", &NetworkConfig::lambda_r);
        integer("n_tx", &NetworkConfig::n_tx);
        integer("n_rx", &NetworkConfig::n_rx);
        real("alpha", &NetworkConfig::alpha);
        real("p_tx_dbm", &NetworkConfig::p_tx_dbm);
        real("noise_dbm", &NetworkConfig::noise_dbm);
        real("gamma_c_db", &NetworkConfig::gamma_c_db);
        real("gamma_r_db", &NetworkConfig::gamma_r_db);
        real("h_t", &NetworkConfig::h_t);
        real("h_bs", &NetworkConfig::h_bs);
        real("h_ue", &NetworkConfig::h_ue);
        real("r_area", &NetworkConfig::r_area);
        real("bandwidth_hz", &NetworkConfig::bandwidth_hz);
        integer("kappa", &NetworkConfig::kappa);
        real("beta_int", &NetworkConfig::beta_int);
        real("rcs", &NetworkConfig::rcs);
        real("r_ref", &NetworkConfig::r_ref);
        real("length_unit_m", &NetworkConfig::length_unit_m);
        real("alpha_r", &NetworkConfig::alpha_r);
        real("alpha_bar", &NetworkConfig::alpha_bar);
        flag("radar_shift_domain", &NetworkConfig::radar_shift_domain);
        flag("objective_shift_domain", &NetworkConfig::objective_shift_domain);
        flag("radar_alternating_sign", &NetworkConfig::radar_alternating_sign);
        flag("radar_include_tx_power", &NetworkConfig::radar_include_tx_power);
        flag("guard_annulus", &NetworkConfig::guard_annulus);
        flag("matched_beam", &NetworkConfig::matched_beam);
        power("p_tx_bar_dbm", &PowerModel::p_tx_bar_dbm);
        power("eta_eff", &PowerModel::eta_eff);
        power("p_circ_dbm", &PowerModel::p_circ_dbm);
        return t;
    }();
    return table;
}

} // namespace

bool set_field(Scenario& sc, const std::string& key, const std::string& value)
{
    const auto it = setters().find(key);
    if (it == setters().end())
        return false;
    it->second(sc, value);
    return true;
}

Scenario parse_config(std::istream& in)
{
    Scenario sc;
    bool have_r_ref = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (!set_field(sc, key, value))
                throw ParameterError("unknown key '" + key + "'");
        } catch (const ParameterError& e) {
            throw ParameterError("config line " + std::to_string(lineno) + ": " + e.what());
        }
        have_r_ref = have_r_ref || key == "r_ref";
    }
    if (!have_r_ref && sc.cfg.lambda_b > 0.0)
        sc.cfg.r_ref = mean_cell_radius(sc.cfg.lambda_b);
    validate(sc.cfg);
    validate(sc.pm);
    return sc;
}

Scenario load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open config '" + path + "'");
    return parse_config(in);
}

} // namespace isac
