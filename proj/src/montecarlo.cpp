#include "isac/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <limits>
#include <thread>

namespace isac {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename Fn>
void parallel_for(long n, int workers, Fn&& fn)
{
    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<int>(std::min<long>(workers, std::max(1L, n)));
    std::atomic<long> next{0};
    const long chunk = 256;
    auto body = [&] {
        for (;;) {
            const long lo = next.fetch_add(chunk);
            if (lo >= n)
                return;
            const long hi = std::min(n, lo + chunk);
            for (long i = lo; i < hi; ++i)
                fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(body);
    body();
    for (auto& t : pool)
        t.join();
}

// BS layout conditioned on at least one BS inside the analysis disc
template <typename Rng>
std::vector<Eigen::Vector2d> sample_bs_layout(const NetworkConfig& cfg, Rng& rng)
{
    const double guard = cfg.guard_annulus && cfg.lambda_b > 0.0 ? 2.0 * mean_cell_radius(cfg.lambda_b) : 0.0;
    const double radius = cfg.r_area + guard;
    for (;;) {
        auto pts = sample_ppp(cfg.lambda_b, radius, rng);
        for (const auto& p : pts)
            if (p.norm() <= cfg.r_area)
                return pts;
    }
}

int nearest(const std::vector<Eigen::Vector2d>& pts, const Eigen::Vector2d& q)
{
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = (pts[i] - q).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

template <typename Rng>
void populate_probes(Scene& scene, const NetworkConfig& cfg, Rng& rng)
{
    scene.user_positions = sample_ppp(cfg.lambda_u, cfg.r_area, rng);
    for (const auto& u : scene.user_positions)
        scene.user_bs.push_back(nearest(scene.bs_positions, u));
    for (const auto& t : sample_ppp(cfg.lambda_r, cfg.r_area, rng)) {
        scene.target_positions.emplace_back(t.x(), t.y(), cfg.h_t);
        scene.target_bs.push_back(nearest(scene.bs_positions, t));
    }
}

template <typename Rng>
ZfPrecoder<std::complex<double>> draw_precoder(const NetworkConfig& cfg, Rng& rng, double& residual)
{
    for (;;) {
        const Eigen::MatrixXcd H = rayleigh_channel(cfg.kappa, cfg.n_tx, rng);
        try {
            auto zf = zf_precoder(H);
            Eigen::MatrixXcd G = H * zf.W;
            G.diagonal().setZero();
            residual = std::max(residual, G.cwiseAbs().maxCoeff());
            return zf;
        } catch (const AccuracyError&) {
        }
    }
}

double path_gain(const NetworkConfig& cfg, double d, double exponent)
{
    return std::pow(d / cfg.length_unit_m, -exponent);
}

} // namespace

std::mt19937_64 snapshot_engine(std::uint64_t seed, std::uint64_t index)
{
    const std::uint64_t k0 = splitmix64(seed);
    const std::uint64_t k1 = splitmix64(k0 ^ splitmix64(index));
    std::seed_seq seq{static_cast<std::uint32_t>(k0), static_cast<std::uint32_t>(k0 >> 32),
                      static_cast<std::uint32_t>(k1), static_cast<std::uint32_t>(k1 >> 32)};
    return std::mt19937_64(seq);
}

std::vector<Eigen::Vector2d> sample_ppp(double density, double radius, std::uint64_t rng_seed)
{
    auto rng = snapshot_engine(rng_seed, 0);
    return sample_ppp(density, radius, rng);
}

SnapshotResult run_comm_snapshot(const NetworkConfig& cfg, std::uint64_t rng_seed, std::uint64_t index)
{
    auto rng = snapshot_engine(rng_seed, 2 * index);
    SnapshotResult out;
    Scene& scene = out.scene;
    scene.bs_positions = sample_bs_layout(cfg, rng);
    scene.probe_bs = nearest(scene.bs_positions, Eigen::Vector2d::Zero());

    const double P = cfg.p_tx();
    const auto zf = draw_precoder(cfg, rng, out.zf_residual);
    const double d0 = scene.bs_positions[scene.probe_bs].norm();
    out.gain = zf.varsigma(0);
    const double signal = P * path_gain(cfg, d0, cfg.alpha) * out.gain;

    std::gamma_distribution<double> mark(cfg.kappa, cfg.beta_int);
    double interference = 0.0;
    for (std::size_t l = 0; l < scene.bs_positions.size(); ++l) {
        if (static_cast<int>(l) == scene.probe_bs)
            continue;
        interference += P * path_gain(cfg, scene.bs_positions[l].norm(), cfg.alpha) * mark(rng);
    }
    out.sinr = signal / (interference + cfg.noise());
    populate_probes(scene, cfg, rng);
    return out;
}

SnapshotResult run_radar_snapshot(const NetworkConfig& cfg, std::uint64_t rng_seed, std::uint64_t index)
{
    auto rng = snapshot_engine(rng_seed, 2 * index + 1);
    SnapshotResult out;
    Scene& scene = out.scene;
    scene.bs_positions = sample_bs_layout(cfg, rng);
    scene.probe_bs = nearest(scene.bs_positions, Eigen::Vector2d::Zero());

    const double P = cfg.p_tx();
    const Eigen::Vector2d served = scene.bs_positions[scene.probe_bs];
    const Eigen::Vector2d los = -served;
    const double d_t = std::hypot(los.norm(), cfg.h_t);
    const double theta = std::atan2(los.y(), std::abs(los.x()));
    const Eigen::VectorXcd a = steering_vector(theta, cfg.n_rx);
    const Eigen::VectorXcd b = steering_vector(theta, cfg.n_tx);

    double beam_gain = 0.0;
    if (cfg.matched_beam) {
        beam_gain = cfg.n_tx;
    } else {
        const auto zf = draw_precoder(cfg, rng, out.zf_residual);
        beam_gain = (b.transpose() * zf.W).squaredNorm();
    }
    out.gain = beam_gain;
    const double echo = P * cfg.rcs * path_gain(cfg, d_t, cfg.alpha_r_eff()) * beam_gain;

    Eigen::MatrixXcd R = cfg.noise() * Eigen::MatrixXcd::Identity(cfg.n_rx, cfg.n_rx);
    for (std::size_t l = 0; l < scene.bs_positions.size(); ++l) {
        if (static_cast<int>(l) == scene.probe_bs)
            continue;
        const double d = (scene.bs_positions[l] - served).norm();
        const auto zf = draw_precoder(cfg, rng, out.zf_residual);
        const Eigen::MatrixXcd Z = rayleigh_channel(cfg.n_rx, cfg.n_tx, rng) * zf.W;
        R.noalias() += P * path_gain(cfg, d, cfg.alpha) * Z * Z.adjoint();
    }

    const Eigen::VectorXcd w = mvdr_filter(R, a);
    out.mvdr_residual = std::abs((w.adjoint() * a)(0) - 1.0);
    const double distortion = std::real((w.adjoint() * R * w)(0));
    out.sinr = echo * std::norm((w.adjoint() * a)(0)) / distortion;
    populate_probes(scene, cfg, rng);
    return out;
}

double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

SnapshotEstimate summarize(const std::vector<double>& outcomes, std::uint64_t seed)
{
    SnapshotEstimate est;
    est.trials = static_cast<long>(outcomes.size());
    est.seed = seed;
    if (outcomes.empty())
        return est;
    const double n = static_cast<double>(outcomes.size());
    est.mean = pairwise_sum(outcomes.data(), outcomes.size()) / n;
    std::vector<double> sq(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        sq[i] = (outcomes[i] - est.mean) * (outcomes[i] - est.mean);
    const double var = outcomes.size() > 1 ? pairwise_sum(sq.data(), sq.size()) / (n - 1.0) : 0.0;
    const double half = 1.959963984540054 * std::sqrt(var / n);
    est.ci_low = est.mean - half;
    est.ci_high = est.mean + half;
    return est;
}

MetricsEstimate estimate_metrics(const NetworkConfig& cfg, const PowerModel& pm, long trials,
                                 std::uint64_t rng_seed, int workers, std::ostream* records)
{
    if (trials < 100)
        throw ParameterError("estimate_metrics: trials must be at least 100");
    validate(cfg);
    validate(pm);

    std::vector<double> sinr_c(trials), sinr_r(trials), zf_res(trials), mvdr_res(trials);
    parallel_for(trials, workers, [&](long i) {
        const auto c = run_comm_snapshot(cfg, rng_seed, i);
        const auto r = run_radar_snapshot(cfg, rng_seed, i);
        sinr_c[i] = c.sinr;
        sinr_r[i] = r.sinr;
        zf_res[i] = std::max(c.zf_residual, r.zf_residual);
        mvdr_res[i] = r.mvdr_residual;
    });

    const double gc = cfg.gamma_c(), gr = cfg.gamma_r();
    const double rate_c = cfg.bandwidth_hz * cfg.lambda_b * std::log2(1.0 + gc);
    const double rate_r = cfg.bandwidth_hz * cfg.lambda_b * std::log2(1.0 + gr);
    const double pt = network_power_density(cfg, pm);

    std::vector<double> cov_c(trials), cov_r(trials), pse_c(trials), pse_r(trials), ee(trials);
    for (long i = 0; i < trials; ++i) {
        cov_c[i] = sinr_c[i] > gc ? 1.0 : 0.0;
        cov_r[i] = sinr_r[i] > gr ? 1.0 : 0.0;
        pse_c[i] = rate_c * cov_c[i];
        pse_r[i] = rate_r * cov_r[i];
        ee[i] = (pse_c[i] + pse_r[i]) / pt;
    }

    MetricsEstimate m;
    m.coverage_comm = summarize(cov_c, rng_seed);
    m.coverage_radar = summarize(cov_r, rng_seed);
    m.pse_comm = summarize(pse_c, rng_seed);
    m.pse_radar = summarize(pse_r, rng_seed);
    m.ee = summarize(ee, rng_seed);
    m.max_zf_residual = *std::max_element(zf_res.begin(), zf_res.end());
    m.max_mvdr_residual = *std::max_element(mvdr_res.begin(), mvdr_res.end());

    if (records) {
        *records << "snapshot_id,sinr_comm,sinr_radar\n" << std::setprecision(17);
        for (long i = 0; i < trials; ++i)
            *records << i << ',' << sinr_c[i] << ',' << sinr_r[i] << '\n';
    }
    return m;
}

std::vector<double> sample_interference(const NetworkConfig& cfg, const InterferenceRegion& region, long trials,
                                        std::uint64_t rng_seed, int workers)
{
    if (std::isinf(region.r_max))
        throw ParameterError("sample_interference: the region must be bounded");
    std::vector<double> out(trials);
    const double d2 = region.d_min * region.d_min;
    const double area = region.r_max * region.r_max - d2;
    parallel_for(trials, workers, [&](long i) {
        auto rng = snapshot_engine(rng_seed, i);
        std::poisson_distribution<long> count(cfg.lambda_b * pi * area);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::gamma_distribution<double> mark(cfg.kappa, cfg.beta_int);
        const long n = count(rng);
        double I = 0.0;
        for (long k = 0; k < n; ++k) {
            const double r = std::sqrt(d2 + area * u(rng));
            I += cfg.p_tx() * path_gain(cfg, r, cfg.alpha) * mark(rng);
        }
        out[i] = I;
    });
    return out;
}

} // namespace isac
