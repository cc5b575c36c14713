#ifndef ISAC_NUMERICS_HPP
#define ISAC_NUMERICS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace isac {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gauss-Laguerre rule: sum_i weights(i) * f(nodes(i)) ~ int_0^inf f(x) e^{-x} dx
template <typename Scalar>
struct QuadratureRule {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Vector nodes;
    Vector weights;

    int order() const { return static_cast<int>(nodes.size()); }
};

/// Golub-Welsch construction from the Jacobi matrix of the Laguerre recurrence.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_laguerre(int order)
{
    if (order < 1 || order > 64)
        throw ParameterError("gauss_laguerre: order must lie in [1, 64], got " + std::to_string(order));

    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix J = Matrix::Zero(order, order);
    for (int i = 0; i < order; ++i) {
        J(i, i) = Scalar(2 * i + 1);
        if (i + 1 < order) {
            J(i, i + 1) = Scalar(i + 1);
            J(i + 1, i) = Scalar(i + 1);
        }
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(J);
    if (es.info() != Eigen::Success)
        throw AccuracyError("gauss_laguerre: eigen-decomposition failed");

    QuadratureRule<Scalar> rule;
    rule.nodes = es.eigenvalues();
    rule.weights = es.eigenvectors().row(0).transpose().array().square();
    return rule;
}

/// Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt
double upper_incomplete_gamma(double s, double x);

/// Finite-sum identity Gamma(n, x) = (n-1)! e^{-x} sum_{k<n} x^k / k!
double upper_incomplete_gamma_int(int n, double x);

struct EulerInversionParams {
    double A = 18.4;
    int N = 15;
    int Q = 15;
};

namespace detail {

template <typename T>
struct real_of { using type = T; };
template <typename T>
struct real_of<std::complex<T>> { using type = T; };

inline bool nonpositive_integer(double c)
{
    return c <= 0.0 && std::abs(c - std::round(c)) < 1e-14;
}

template <typename T>
T hyp2f1_series(double a, double b, double c, T z, int max_terms = 20000)
{
    using R = typename real_of<T>::type;
    T term(1), sum(1);
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= R(1e-17) * std::abs(sum))
            return sum;
        if (term == T(0))
            return sum;
    }
    throw AccuracyError("gauss_2f1: power series did not converge");
}

} // namespace detail

/// Direct power series; only valid for |z| < 1.
template <typename T>
T gauss_2f1_series(double a, double b, double c, T z)
{
    if (detail::nonpositive_integer(c))
        throw DomainError("gauss_2f1: c is a nonpositive integer");
    if (std::abs(z) >= 1.0)
        throw DomainError("gauss_2f1: series needs |z| < 1");
    return detail::hyp2f1_series(a, b, c, z);
}

/// Linear-transformation path: 1/(1-z) when that lands in |w| <= 0.9,
/// otherwise 1-z; throws DomainError outside both regions.
template <typename T>
T gauss_2f1_transformed(double a, double b, double c, T z)
{
    if (detail::nonpositive_integer(c))
        throw DomainError("gauss_2f1: c is a nonpositive integer");
    const T one(1);
    const T w_inv = one / (one - z);
    const T w_ref = one - z;

    if (std::abs(w_inv) <= 0.9) {
        if (std::abs((b - a) - std::round(b - a)) < 1e-12)
            throw DomainError("gauss_2f1: b - a is an integer, 1/(1-z) continuation degenerate");
        const double g1 = std::tgamma(c) * std::tgamma(b - a) / (std::tgamma(b) * std::tgamma(c - a));
        const double g2 = std::tgamma(c) * std::tgamma(a - b) / (std::tgamma(a) * std::tgamma(c - b));
        const T t1 = g1 * std::pow(one - z, T(-a)) * detail::hyp2f1_series(a, c - b, a - b + 1, w_inv);
        const T t2 = g2 * std::pow(one - z, T(-b)) * detail::hyp2f1_series(b, c - a, b - a + 1, w_inv);
        return t1 + t2;
    }
    if (std::abs(w_ref) <= 0.9 && std::abs(z) < 1.0) {
        const double s = c - a - b;
        if (std::abs(s - std::round(s)) < 1e-12)
            throw DomainError("gauss_2f1: c - a - b is an integer, 1-z continuation degenerate");
        const double g1 = std::tgamma(c) * std::tgamma(s) / (std::tgamma(c - a) * std::tgamma(c - b));
        const double g2 = std::tgamma(c) * std::tgamma(-s) / (std::tgamma(a) * std::tgamma(b));
        const T t1 = g1 * detail::hyp2f1_series(a, b, 1 - s, w_ref);
        const T t2 = g2 * std::pow(w_ref, T(s)) * detail::hyp2f1_series(c - a, c - b, 1 + s, w_ref);
        return t1 + t2;
    }
    throw DomainError("gauss_2f1: argument outside the supported continuation region");
}

/// Gauss hypergeometric 2F1(a, b; c; z) for real or complex z: power series
/// for |z| < 0.9, linear transformations beyond.
template <typename T>
T gauss_2f1(double a, double b, double c, T z)
{
    if (detail::nonpositive_integer(c))
        throw DomainError("gauss_2f1: c is a nonpositive integer");
    if (std::abs(z) < 0.9 || detail::nonpositive_integer(a) || detail::nonpositive_integer(b))
        return detail::hyp2f1_series(a, b, c, z);
    return gauss_2f1_transformed(a, b, c, z);
}

enum class CubicMethod { radical, companion };

/// Real roots of a3 x^3 + a2 x^2 + a1 x + a0, sorted ascending.
std::vector<double> solve_cubic(double a3, double a2, double a1, double a0,
                                CubicMethod method = CubicMethod::radical);

std::vector<double> solve_cubic_radical(double a3, double a2, double a1, double a0);
std::vector<double> solve_cubic_companion(double a3, double a2, double a1, double a0);

/// Adaptive Gauss-Kronrod (7-15) integration of f on [a, b].
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol, int max_depth = 40)
    -> decltype(f(a))
{
    static constexpr double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                     0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                     0.207784955007898468, 0.000000000000000000};
    static constexpr double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                     0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                     0.204432940075298892, 0.209482141084727828};
    static constexpr double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                     0.417959183673469388};
    using T = decltype(f(a));

    struct Piece { T kronrod; double err; };
    auto gk = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        const T fc = f(c);
        T k = fc * wk[7];
        T g = fc * wg[3];
        for (int j = 0; j < 7; ++j) {
            const T f1 = f(c - h * xk[j]);
            const T f2 = f(c + h * xk[j]);
            k += (f1 + f2) * wk[j];
            if (j % 2 == 1)
                g += (f1 + f2) * wg[j / 2];
        }
        return Piece{k * h, std::abs(k * h - g * h)};
    };

    std::vector<std::pair<double, double>> stack{{a, b}};
    std::vector<int> depth{0};
    T total{};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        const int d = depth.back();
        stack.pop_back();
        depth.pop_back();
        const Piece p = gk(lo, hi);
        const double scale = (hi - lo) / (b - a);
        if (p.err <= std::max(abs_tol * scale, rel_tol * std::abs(p.kronrod)) || d >= max_depth) {
            total += p.kronrod;
            continue;
        }
        const double mid = 0.5 * (lo + hi);
        stack.push_back({lo, mid});
        depth.push_back(d + 1);
        stack.push_back({mid, hi});
        depth.push_back(d + 1);
    }
    return total;
}

} // namespace isac

#endif
