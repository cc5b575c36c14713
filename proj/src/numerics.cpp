#include "isac/numerics.hpp"

#include <algorithm>
#include <limits>

namespace isac {

namespace {

double lower_gamma_series(double s, double x)
{
    // gamma(s, x) via x^s e^{-x} sum x^n / (s (s+1) ... (s+n))
    double term = 1.0 / s, sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17)
            break;
    }
    return std::exp(s * std::log(x) - x) * sum;
}

double upper_gamma_fraction(double s, double x)
{
    // modified Lentz evaluation of the Legendre continued fraction
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return std::exp(s * std::log(x) - x + std::log(h));
}

double eval_cubic(double a3, double a2, double a1, double a0, double x)
{
    return ((a3 * x + a2) * x + a1) * x + a0;
}

double polish_root(double a3, double a2, double a1, double a0, double x)
{
    for (int it = 0; it < 4; ++it) {
        const double p = eval_cubic(a3, a2, a1, a0, x);
        const double dp = (3.0 * a3 * x + 2.0 * a2) * x + a1;
        if (dp == 0.0 || p == 0.0)
            break;
        const double step = p / dp;
        const double next = x - step;
        if (std::abs(eval_cubic(a3, a2, a1, a0, next)) >= std::abs(p))
            break;
        x = next;
    }
    return x;
}

std::vector<double> accept_real(const std::vector<std::complex<double>>& roots,
                                double a3, double a2, double a1, double a0)
{
    std::vector<double> out;
    for (const auto& r : roots)
        if (std::abs(r.imag()) < 1e-7 * (1.0 + std::abs(r.real())))
            out.push_back(polish_root(a3, a2, a1, a0, r.real()));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

double upper_incomplete_gamma(double s, double x)
{
    if (!(s > 0.0))
        throw ParameterError("upper_incomplete_gamma: shape must be positive");
    if (!(x >= 0.0))
        throw ParameterError("upper_incomplete_gamma: argument must be nonnegative");
    if (x == 0.0)
        return std::tgamma(s);
    if (x < s + 1.0)
        return std::tgamma(s) - lower_gamma_series(s, x);
    return upper_gamma_fraction(s, x);
}

double upper_incomplete_gamma_int(int n, double x)
{
    if (n < 1)
        throw ParameterError("upper_incomplete_gamma_int: shape must be a positive integer");
    if (!(x >= 0.0))
        throw ParameterError("upper_incomplete_gamma_int: argument must be nonnegative");
    double term = 1.0, sum = 1.0, fact = 1.0;
    for (int k = 1; k < n; ++k) {
        term *= x / k;
        sum += term;
        fact *= k;
    }
    return fact * std::exp(-x) * sum;
}

std::vector<double> solve_cubic_radical(double a3, double a2, double a1, double a0)
{
    if (a3 == 0.0)
        throw ParameterError("solve_cubic: leading coefficient is zero");
    using C = std::complex<double>;
    const double B = a2 / a3, Cc = a1 / a3, D = a0 / a3;
    const double d0 = B * B - 3.0 * Cc;
    const double d1 = 2.0 * B * B * B - 9.0 * B * Cc + 27.0 * D;
    const C disc = std::sqrt(C(d1 * d1 - 4.0 * d0 * d0 * d0));

    C u = (C(d1) + disc) / 2.0;
    const C v = (C(d1) - disc) / 2.0;
    if (std::abs(v) > std::abs(u))
        u = v;

    std::vector<C> roots;
    if (std::abs(u) == 0.0) {
        roots.assign(3, C(-B / 3.0));
    } else {
        const C k = std::pow(u, 1.0 / 3.0);
        const C xi(-0.5, std::sqrt(3.0) / 2.0);
        C w(1.0);
        for (int j = 0; j < 3; ++j) {
            const C kj = w * k;
            roots.push_back(-(B + kj + d0 / kj) / 3.0);
            w *= xi;
        }
    }
    return accept_real(roots, a3, a2, a1, a0);
}

std::vector<double> solve_cubic_companion(double a3, double a2, double a1, double a0)
{
    if (a3 == 0.0)
        throw ParameterError("solve_cubic: leading coefficient is zero");
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    M(0, 0) = -a2 / a3;
    M(0, 1) = -a1 / a3;
    M(0, 2) = -a0 / a3;
    M(1, 0) = 1.0;
    M(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(M, false);
    if (es.info() != Eigen::Success)
        throw AccuracyError("solve_cubic: companion eigen-solve failed");
    std::vector<std::complex<double>> roots(es.eigenvalues().data(), es.eigenvalues().data() + 3);
    return accept_real(roots, a3, a2, a1, a0);
}

std::vector<double> solve_cubic(double a3, double a2, double a1, double a0, CubicMethod method)
{
    return method == CubicMethod::radical ? solve_cubic_radical(a3, a2, a1, a0)
                                          : solve_cubic_companion(a3, a2, a1, a0);
}

} // namespace isac
