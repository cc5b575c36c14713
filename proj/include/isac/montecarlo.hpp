#ifndef ISAC_MONTECARLO_HPP
#define ISAC_MONTECARLO_HPP

#include "isac/analytic.hpp"
#include "isac/model.hpp"
#include "isac/numerics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

namespace isac {

/// Independent engine for snapshot `index` of run `seed`; the stream does not
/// depend on which worker draws it.
std::mt19937_64 snapshot_engine(std::uint64_t seed, std::uint64_t index);

template <typename Rng>
std::vector<Eigen::Vector2d> sample_ppp(double density, double radius, Rng& rng)
{
    std::vector<Eigen::Vector2d> pts;
    if (density <= 0.0)
        return pts;
    std::poisson_distribution<long> count(density * pi * radius * radius);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const long n = count(rng);
    pts.reserve(n);
    for (long i = 0; i < n; ++i) {
        const double r = radius * std::sqrt(u(rng));
        const double phi = 2.0 * pi * u(rng);
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
    return pts;
}

std::vector<Eigen::Vector2d> sample_ppp(double density, double radius, std::uint64_t rng_seed);

/// i.i.d. CN(0, 1) entries
template <typename Rng>
Eigen::MatrixXcd rayleigh_channel(int rows, int cols, Rng& rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd H(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            H(i, j) = std::complex<double>(n(rng), n(rng));
    return H;
}

template <typename Scalar>
struct ZfPrecoder {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> W;
    Eigen::Matrix<typename Eigen::NumTraits<Scalar>::Real, Eigen::Dynamic, 1> varsigma;
};

/// F = H^H (H H^H)^-1 with columns normalized to unit norm; varsigma_k = 1 / |f_k|^2.
/// Throws AccuracyError when cond(H H^H) > 1e12.
template <typename Derived>
ZfPrecoder<typename Derived::Scalar> zf_precoder(const Eigen::MatrixBase<Derived>& H)
{
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix G = H * H.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues();
    if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() / ev.minCoeff() > 1e12)
        throw AccuracyError("zf_precoder: channel Gram matrix is numerically singular");

    ZfPrecoder<Scalar> out;
    out.W = H.adjoint() * G.ldlt().solve(Matrix::Identity(H.rows(), H.rows()));
    out.varsigma.resize(H.rows());
    for (Eigen::Index k = 0; k < out.W.cols(); ++k) {
        const auto norm2 = out.W.col(k).squaredNorm();
        out.varsigma(k) = 1.0 / norm2;
        out.W.col(k) /= std::sqrt(norm2);
    }
    return out;
}

/// w = R^-1 a / (a^H R^-1 a) after diagonal loading of 1e-9 trace(R) / N.
template <typename DerivedR, typename DerivedA>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> mvdr_filter(const Eigen::MatrixBase<DerivedR>& R,
                                                                       const Eigen::MatrixBase<DerivedA>& a)
{
    using Scalar = typename DerivedA::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index n = R.rows();
    Matrix L = R;
    L.diagonal().array() += Scalar(1e-9 * std::real(R.trace()) / double(n));
    Eigen::LLT<Matrix> llt(L);
    if (llt.info() != Eigen::Success)
        throw AccuracyError("mvdr_filter: covariance is not positive definite");
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = llt.solve(a);
    return y / (a.adjoint() * y)(0);
}

/// ULA with half-wavelength spacing: element m = exp(j pi m sin(theta)).
template <typename Real = double>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> steering_vector(Real theta, int n_elements)
{
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> a(n_elements);
    const Real s = std::sin(theta);
    for (int m = 0; m < n_elements; ++m)
        a(m) = std::polar(Real(1), Real(pi) * m * s);
    return a;
}

struct Scene {
    std::vector<Eigen::Vector2d> bs_positions;
    std::vector<Eigen::Vector2d> user_positions;
    std::vector<Eigen::Vector3d> target_positions;
    // index of the serving BS for each user and each target
    std::vector<int> user_bs;
    std::vector<int> target_bs;
    // serving BS of the probe at the origin
    int probe_bs = -1;
};

struct SnapshotResult {
    double sinr = 0.0;
    Scene scene;
    // serving-link gain: ZF varsigma (comm) or transmit beam gain |b^T W|^2 (radar)
    double gain = 0.0;
    // max |h_j^H w_k|, j != k, over every ZF precoder built in the snapshot
    double zf_residual = 0.0;
    // |w^H a - 1| of the MVDR receiver (radar only)
    double mvdr_residual = 0.0;
};

/// Typical user at the origin, serving BS nearest in the plane.
SnapshotResult run_comm_snapshot(const NetworkConfig& cfg, std::uint64_t rng_seed, std::uint64_t index = 0);

/// Typical target at altitude h_t above the origin.
SnapshotResult run_radar_snapshot(const NetworkConfig& cfg, std::uint64_t rng_seed, std::uint64_t index = 0);

struct SnapshotEstimate {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

struct MetricsEstimate {
    SnapshotEstimate coverage_comm;
    SnapshotEstimate coverage_radar;
    SnapshotEstimate pse_comm;   // bit/s/m^2
    SnapshotEstimate pse_radar;  // bit/s/m^2
    SnapshotEstimate ee;         // bit/J
    double max_zf_residual = 0.0;
    double max_mvdr_residual = 0.0;
};

/// 0 workers selects std::thread::hardware_concurrency(). When `records` is
/// given, one CSV line snapshot_id,sinr_comm,sinr_radar is written per snapshot.
MetricsEstimate estimate_metrics(const NetworkConfig& cfg, const PowerModel& pm, long trials,
                                 std::uint64_t rng_seed, int workers = 0, std::ostream* records = nullptr);

/// Interference samples over the PPP annulus of `region`.
std::vector<double> sample_interference(const NetworkConfig& cfg, const InterferenceRegion& region, long trials,
                                        std::uint64_t rng_seed, int workers = 0);

/// 95% normal-approximation estimate from per-snapshot outcomes.
SnapshotEstimate summarize(const std::vector<double>& outcomes, std::uint64_t seed);

/// Order-independent pairwise sum.
double pairwise_sum(const double* x, std::size_t n);

} // namespace isac

#endif
