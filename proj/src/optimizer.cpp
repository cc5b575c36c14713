#include "isac/optimizer.hpp"
#include "isac/analytic.hpp"
#include "isac/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isac {

namespace {

double factorial(int n)
{
    double f = 1.0;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

bool use_comm(Mode m) { return m != Mode::radar_only; }
bool use_radar(Mode m) { return m != Mode::comm_only; }

// sum_i b1_i b2_i L^{1-i} e^{-(b3/L + b4 L)}, the first-order radar outage term, and its derivative
double outage(const ObjectiveCoefficients& c, double L, double* dL)
{
    const double e = std::exp(-(c.b3 / L + c.b4 * L));
    double f = 0.0, df = 0.0;
    for (std::size_t i = 0; i < c.b1.size(); ++i) {
        const double fi = c.b1[i] * c.b2[i] * std::pow(L, 1.0 - double(i)) * e;
        f += fi;
        df += fi * ((1.0 - double(i)) / L + c.b3 / (L * L) - c.b4);
    }
    if (dL)
        *dL = df;
    return f;
}

double raw_objective(const ObjectiveCoefficients& c, double L, Mode mode)
{
    double v = 0.0;
    if (use_comm(mode))
        v += c.a1 * L * std::exp(-c.a3 * L);
    if (use_radar(mode))
        v += c.b5 * (1.0 - outage(c, L, nullptr));
    return c.ee_scale * v;
}

double raw_derivative(const ObjectiveCoefficients& c, double L, Mode mode)
{
    double v = 0.0;
    if (use_comm(mode))
        v += c.a1 * std::exp(-c.a3 * L) * (1.0 - c.a3 * L);
    if (use_radar(mode)) {
        double d = 0.0;
        outage(c, L, &d);
        v -= c.b5 * d;
    }
    return c.ee_scale * v;
}

OptimizationResult grid_fallback(const std::function<double(double)>& ee, std::pair<double, double> bracket,
                                 const std::string& why)
{
    OptimizationResult r = grid_search(ee, log_grid(bracket.first, bracket.second, 400));
    r.bracket = bracket;
    r.diagnostics = why + "; fell back to 400-point grid";
    return r;
}

} // namespace

const char* to_string(Method m)
{
    switch (m) {
    case Method::newton: return "newton";
    case Method::closed_form_comm: return "closed_form_comm";
    case Method::closed_form_radar_cubic: return "closed_form_radar_cubic";
    case Method::grid: return "grid";
    }
    return "?";
}

const char* to_string(Mode m)
{
    switch (m) {
    case Mode::isac: return "isac";
    case Mode::comm_only: return "comm";
    case Mode::radar_only: return "radar";
    }
    return "?";
}

ObjectiveCoefficients objective_coefficients(const NetworkConfig& cfg, const PowerModel& pm)
{
    validate(cfg);
    validate(pm);
    ObjectiveCoefficients c;
    const double r1 = 1.0, H1 = 1.0;
    const double a = cfg.alpha, beta = cfg.beta_int;
    const double gc = cfg.gamma_c(), gr = cfg.gamma_r();

    c.a1 = std::log2(1.0 + gc) * 2.0 * pi * H1 * std::exp(r1) * r1;
    const double t = std::pow(r1, -a) / gc - normalized_noise(cfg);
    c.a2.resize(cfg.kappa);
    if (t <= 0.0) {
        // the single node sits in deep outage: comm coverage vanishes
        c.a1 = 0.0;
        std::fill(c.a2.begin(), c.a2.end(), pi * r1 * r1 / cfg.kappa);
    } else {
        for (int k = 0; k < cfg.kappa; ++k)
            c.a2[k] = 2.0 * pi / (a * factorial(k)) * std::pow(beta * t, -2.0 / a)
                    * upper_incomplete_gamma((k + 2.0) / a, beta * t)
                + pi * r1 * r1 / cfg.kappa;
    }
    c.a3 = 0.0;
    for (double v : c.a2)
        c.a3 += v;

    const double h = cfg.h_t / cfg.length_unit_m;
    const double rho = cfg.objective_shift_domain ? h + r1 : r1;
    const int N = cfg.n_tx;
    c.b3 = radar_exponent_coefficient(cfg, rho);
    c.b4 = 2.0 * pi * (rho * rho - h * h);
    c.b5 = std::log2(1.0 + gr);
    c.b1.resize(N);
    c.b2.resize(N);
    const double sign = cfg.radar_alternating_sign ? -1.0 : 1.0;
    for (int i = 0; i < N; ++i) {
        c.b1[i] = 4.0 * pi * H1 * std::exp(r1) * rho / factorial(i);
        c.b2[i] = std::pow(sign * c.b3, i);
    }
    c.ee_scale = cfg.bandwidth_hz / pm.per_bs_watt();
    c.length_unit_m = cfg.length_unit_m;
    c.n_tx = N;
    return c;
}

double objective_ee(const ObjectiveCoefficients& c, double lambda, Mode mode)
{
    return std::max(0.0, raw_objective(c, c.to_normalized(lambda), mode));
}

double objective_derivative(const ObjectiveCoefficients& c, double lambda, Mode mode)
{
    const double L = c.to_normalized(lambda);
    if (raw_objective(c, L, mode) < 0.0)
        return 0.0;
    return raw_derivative(c, L, mode) * c.length_unit_m * c.length_unit_m;
}

double published_radar_derivative(const ObjectiveCoefficients& c, double lambda)
{
    const double L = c.to_normalized(lambda);
    const int N = c.n_tx;
    double k = 0.0;
    for (std::size_t i = 0; i < c.b1.size(); ++i)
        k += c.b1[i] * c.b2[i];
    const double e = k * std::exp(-(c.b3 / L + c.b4 * L));
    const double m = std::pow(-1.0 / L, N);
    const double g = 1.0 + m * L;
    const double v = -e * L * g / ((1.0 + L) * (1.0 + L)) + e * g / (1.0 + L)
        + e * L * g * (c.b3 / (L * L) - c.b4) / (1.0 + L)
        + e * L * (m + std::pow(-1.0 / L, N - 1) * N / L) / (1.0 + L);
    return c.ee_scale * c.b5 * v * c.length_unit_m * c.length_unit_m;
}

double optimal_density_comm_only(const ObjectiveCoefficients& c)
{
    if (!(c.a3 > 0.0))
        throw ParameterError("optimal_density_comm_only: a3 must be positive");
    return c.to_density(1.0 / c.a3);
}

RadarCubicResult optimal_density_radar_only(const ObjectiveCoefficients& c, int n_tx,
                                            std::pair<double, double> bracket, bool grid_fallback_enabled)
{
    RadarCubicResult out;
    const double N = n_tx, b3 = c.b3, b4 = c.b4;
    // L < 1: b4 L^3 - (1 - N - b4) L^2 - (2 - N + b3) L - b3 = 0
    out.branch1 = {b4, -(1.0 - N - b4), -(2.0 - N + b3), -b3};
    // L > 1: b4 L^3 + b4 L^2 - (b3 + 1) L - b3 = 0
    out.branch2 = {b4, b4, -(b3 + 1.0), -b3};

    auto ee = [&](double lambda) { return objective_ee(c, lambda, Mode::radar_only); };
    const double L_lo = c.to_normalized(bracket.first), L_hi = c.to_normalized(bracket.second);

    for (int branch = 1; branch <= 2; ++branch) {
        const auto& p = branch == 1 ? out.branch1 : out.branch2;
        if (p[0] == 0.0)
            continue;
        for (double L : solve_cubic(p[0], p[1], p[2], p[3])) {
            CubicRoot r;
            r.branch = branch;
            r.normalized = L;
            r.lambda = c.to_density(L);
            r.residual = std::abs(((p[0] * L + p[1]) * L + p[2]) * L + p[3]);
            const bool side = branch == 1 ? L < 1.0 : L > 1.0;
            r.admissible = L > 0.0 && side && L >= L_lo && L <= L_hi;
            if (r.admissible) {
                r.ee = ee(r.lambda);
                r.local_max = r.ee >= ee(r.lambda * 0.9) && r.ee >= ee(r.lambda * 1.1);
            }
            out.roots.push_back(r);
        }
    }

    const CubicRoot* best = nullptr;
    for (const auto& r : out.roots)
        if (r.admissible && (!best || r.ee > best->ee))
            best = &r;

    if (!best) {
        if (!grid_fallback_enabled)
            throw AccuracyError("optimal_density_radar_only: no admissible real positive root");
        out.result = grid_fallback(ee, bracket, "no admissible cubic root");
        return out;
    }

    OptimizationResult& res = out.result;
    res.lambda_star = best->lambda;
    res.ee_star = best->ee;
    res.method = Method::closed_form_radar_cubic;
    res.converged = true;
    res.bracket = bracket;
    const double d = objective_derivative(c, best->lambda, Mode::radar_only);
    res.residual = best->ee > 0.0 ? std::abs(d) * best->lambda / best->ee : std::abs(d);
    std::ostringstream diag;
    diag << "branch " << best->branch << " root L=" << best->normalized
         << (best->local_max ? " is a local maximum" : " is not a local maximum of radar-only EE");
    res.diagnostics = diag.str();
    return out;
}

OptimizationResult optimize_density_newton(const NetworkConfig& cfg, const PowerModel& pm, const NewtonOptions& opt)
{
    const ObjectiveCoefficients c = objective_coefficients(cfg, pm);
    const double lo = c.to_normalized(opt.bracket.first), hi = c.to_normalized(opt.bracket.second);
    auto ee = [&](double L) { return std::max(0.0, raw_objective(c, L, opt.mode)); };
    auto f = [&](double L) { return raw_objective(c, L, opt.mode) < 0.0 ? 0.0 : raw_derivative(c, L, opt.mode); };
    auto ee_density = [&](double lambda) { return objective_ee(c, lambda, opt.mode); };

    double x = opt.lambda0 > 0.0 ? c.to_normalized(opt.lambda0) : (c.a3 > 0.0 ? 1.0 / c.a3 : std::sqrt(lo * hi));
    x = std::clamp(x, lo, hi);

    OptimizationResult res;
    res.bracket = opt.bracket;
    res.method = Method::newton;
    int it = 0;

    // leave a region where the clamped objective is identically zero
    while (ee(x) == 0.0 && x > lo && it < opt.max_iter) {
        x = std::max(lo, 0.5 * x);
        ++it;
    }

    // expand towards the ascent direction until the derivative changes sign
    double a = x, b = x;
    if (f(x) > 0.0) {
        while (f(b) > 0.0) {
            if (b >= hi || ++it >= opt.max_iter)
                return grid_fallback(ee_density, opt.bracket, "EE still increasing at the upper bracket end");
            a = b;
            b = std::min(hi, 2.0 * b);
        }
    } else {
        while (f(a) <= 0.0) {
            if (a <= lo || ++it >= opt.max_iter)
                return grid_fallback(ee_density, opt.bracket, "EE still decreasing at the lower bracket end");
            b = a;
            a = std::max(lo, 0.5 * a);
        }
    }

    // safeguarded Newton on f with f' from a central difference
    x = 0.5 * (a + b);
    double fx = f(x);
    bool done = false;
    for (; it < opt.max_iter; ++it) {
        const double ex = ee(x);
        if (ex > 0.0 && std::abs(fx) * x / ex < opt.tol) {
            done = true;
            break;
        }
        if ((b - a) <= 4e-16 * b) {
            done = true;
            break;
        }
        const double h = 1e-4 * x;
        const double fp = (f(x + h) - f(x - h)) / (2.0 * h);
        double next = fp < 0.0 ? x - fx / fp : 0.5 * (a + b);
        if (!(next > a && next < b))
            next = 0.5 * (a + b);
        x = next;
        fx = f(x);
        if (fx > 0.0)
            a = x;
        else
            b = x;
    }

    res.iterations = it;
    res.lambda_star = c.to_density(x);
    res.ee_star = ee(x);
    res.residual = res.ee_star > 0.0 ? std::abs(fx) * x / res.ee_star : std::abs(fx);
    res.converged = done;
    if (!done) {
        std::ostringstream diag;
        diag << "max_iter reached at lambda=" << res.lambda_star << " residual=" << res.residual;
        res.diagnostics = diag.str();
        return res;
    }
    const double e0 = ee_density(res.lambda_star);
    if (e0 < ee_density(res.lambda_star * 0.99) || e0 < ee_density(res.lambda_star * 1.01))
        return grid_fallback(ee_density, opt.bracket, "stationary point is not a maximum");
    return res;
}

int count_local_maxima(const std::vector<double>& v)
{
    std::vector<double> runs;
    for (double x : v)
        if (runs.empty() || x != runs.back())
            runs.push_back(x);
    if (runs.size() <= 1)
        return runs.empty() ? 0 : 1;
    int count = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const bool left = i == 0 || runs[i] > runs[i - 1];
        const bool right = i + 1 == runs.size() || runs[i] > runs[i + 1];
        count += left && right ? 1 : 0;
    }
    return count;
}

bool is_unimodal(const std::vector<double>& v)
{
    int prev = 0, changes = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double d = v[i] - v[i - 1];
        const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (s == 0)
            continue;
        if (prev != 0 && s != prev) {
            ++changes;
            if (s > 0)
                return false;
        }
        prev = s;
    }
    return changes <= 1;
}

OptimizationResult grid_search(const std::function<double(double)>& ee, const std::vector<double>& grid)
{
    if (grid.empty())
        throw ParameterError("grid_search: empty grid");
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = ee(grid[i]);
    const auto best = std::max_element(v.begin(), v.end()) - v.begin();
    OptimizationResult r;
    r.method = Method::grid;
    r.lambda_star = grid[best];
    r.ee_star = v[best];
    r.iterations = static_cast<int>(grid.size());
    r.converged = true;
    r.bracket = {grid.front(), grid.back()};
    r.unimodal = is_unimodal(v);
    r.local_maxima = count_local_maxima(v);
    return r;
}

OptimizationResult grid_search(const NetworkConfig& cfg, const PowerModel& pm, const std::vector<double>& grid,
                               Mode mode)
{
    const ObjectiveCoefficients c = objective_coefficients(cfg, pm);
    return grid_search([&](double lambda) { return objective_ee(c, lambda, mode); }, grid);
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    if (n < 1 || !(lo > 0.0) || !(hi >= lo))
        throw ParameterError("log_grid: need n >= 1 and 0 < lo <= hi");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

} // namespace isac
