#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isac/numerics.hpp"
#include "isac/optimizer.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace isac;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

// int_x^inf t^{s-1} e^{-t} dt by double-exponential quadrature
double gamma_oracle(double s, double x)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [s](double t) { return std::exp((s - 1.0) * std::log(t) - t); };
    return integrator.integrate(f, x, std::numeric_limits<double>::infinity(), 1e-15);
}

// plain power series in long double with a 1e-12 relative term cutoff
double hyp2f1_oracle(double a, double b, double c, double z)
{
    long double term = 1.0L, sum = 1.0L;
    for (int n = 0; n < 200000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0L)) * z;
        sum += term;
        if (std::fabs(term) < 1e-12L * 1e-8L * std::fabs(sum))
            break;
    }
    return static_cast<double>(sum);
}

} // namespace

TEST_CASE("gauss_laguerre order 1 and 2 closed forms")
{
    const auto r1 = gauss_laguerre(1);
    CHECK(r1.nodes(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r1.weights(0) == doctest::Approx(1.0).epsilon(1e-15));

    const auto r2 = gauss_laguerre(2);
    const double s2 = std::sqrt(2.0);
    CHECK(std::abs(r2.nodes(0) - (2.0 - s2)) < 1e-12);
    CHECK(std::abs(r2.nodes(1) - (2.0 + s2)) < 1e-12);
    CHECK(std::abs(r2.weights(0) - (2.0 + s2) / 4.0) < 1e-12);
    CHECK(std::abs(r2.weights(1) - (2.0 - s2) / 4.0) < 1e-12);
}

TEST_CASE("gauss_laguerre invariants for every order")
{
    for (int n = 1; n <= 64; ++n) {
        const auto r = gauss_laguerre(n);
        REQUIRE(r.order() == n);
        REQUIRE(r.weights.size() == n);
        CHECK(r.nodes(0) > 0.0);
        for (int i = 1; i < n; ++i)
            CHECK(r.nodes(i) > r.nodes(i - 1));
        CHECK((r.weights.array() > 0.0).all());
        CHECK(std::abs(r.weights.sum() - 1.0) < 1e-12);
    }
    const auto r20 = gauss_laguerre(20);
    CHECK(std::abs(r20.weights.dot(r20.nodes) - 1.0) < 1e-10);
    CHECK_THROWS_AS(gauss_laguerre(0), ParameterError);
    CHECK_THROWS_AS(gauss_laguerre(65), ParameterError);
}

TEST_CASE("gauss_laguerre integrates polynomials of degree 2n-1 exactly")
{
    for (int n : {2, 4, 6, 8}) {
        const auto r = gauss_laguerre(n);
        double fact = 1.0;
        for (int k = 0; k <= 2 * n - 1; ++k) {
            if (k > 0)
                fact *= k;
            const double q = r.weights.dot(r.nodes.array().pow(k).matrix());
            CHECK(rel_err(q, fact) < 1e-12);
        }
    }
}

TEST_CASE("gauss_laguerre long double instantiation")
{
    const auto r = gauss_laguerre<long double>(10);
    CHECK(std::fabs(r.weights.sum() - 1.0L) < 1e-15L);
}

TEST_CASE("upper_incomplete_gamma trivial values")
{
    CHECK(upper_incomplete_gamma(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(upper_incomplete_gamma(3.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rel_err(upper_incomplete_gamma(2.5, 1.3), gamma_oracle(2.5, 1.3)) < 1e-10);
    for (int s = 1; s <= 10; ++s)
        CHECK(rel_err(upper_incomplete_gamma(s, 0.0), std::tgamma(s)) < 1e-12);
    CHECK_THROWS_AS(upper_incomplete_gamma(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(upper_incomplete_gamma(1.0, -1.0), ParameterError);
}

TEST_CASE("upper_incomplete_gamma matches the integral oracle on random arguments")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> us(0.1, 12.0), ux(0.01, 30.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double s = us(rng), x = ux(rng);
        worst = std::max(worst, rel_err(upper_incomplete_gamma(s, x), gamma_oracle(s, x)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("integer-shape finite sum agrees with the general path")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.0, 40.0);
    for (int n = 1; n <= 10; ++n)
        for (int i = 0; i < 20; ++i) {
            const double x = ux(rng);
            CHECK(rel_err(upper_incomplete_gamma_int(n, x), upper_incomplete_gamma(n, x)) < 1e-12);
        }
}

TEST_CASE("gauss_2f1 trivial values")
{
    CHECK(gauss_2f1(2.0, 3.0, 4.5, 0.0) == 1.0);
    CHECK(gauss_2f1(1.0, 1.0, 2.0, 0.5) == doctest::Approx(-std::log(0.5) / 0.5).epsilon(1e-14));
    const double a = 2.7;
    CHECK(rel_err(gauss_2f1(a, -2.0 / a, (a - 2.0) / a, -0.3), hyp2f1_oracle(a, -2.0 / a, (a - 2.0) / a, -0.3))
          < 1e-12);
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, -2.0, 0.5), DomainError);
    CHECK_THROWS_AS(gauss_2f1_series(1.0, 1.0, 2.0, 1.2), DomainError);
}

TEST_CASE("gauss_2f1 matches the series oracle at random in-disc arguments")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ua(-2.5, 2.5), uc(0.6, 4.0), uz(-0.98, 0.98);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = ua(rng), b = ua(rng), c = uc(rng), z = uz(rng);
        worst = std::max(worst, rel_err(gauss_2f1(a, b, c, z), hyp2f1_oracle(a, b, c, z)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("gauss_2f1 series and continuation agree on the overlap ring")
{
    const double alpha = 2.7;
    // the interference kernel has c - a - b = -3, so only z < 0 (its use) is checked for it
    const double params[][4] = {{4.0, -2.0 / alpha, 1.0 - 2.0 / alpha, 0.0}, {1.3, 0.4, 2.2, 1.0}, {0.7, -1.6, 1.45, 1.0}};
    for (const auto& p : params)
        for (double m = 0.85; m <= 0.95 + 1e-12; m += 0.01)
            for (double z : {-m, m}) {
                if (z > 0.0 && p[3] == 0.0)
                    continue;
                const double s = gauss_2f1_series(p[0], p[1], p[2], z);
                const double t = gauss_2f1_transformed(p[0], p[1], p[2], z);
                CHECK(rel_err(t, s) < 1e-9);
            }
}

TEST_CASE("gauss_2f1 continuation beyond z = -1 matches the integral form")
{
    // Pfaff: 2F1(a, b; c; z) = (1 - z)^-a 2F1(a, c - b; c; z / (z - 1))
    for (double z : {-1.0, -3.0, -25.0, -1e4})
        CHECK(rel_err(gauss_2f1(1.0, 1.5, 2.5, z), hyp2f1_oracle(1.0, 1.0, 2.5, z / (z - 1.0)) / (1.0 - z)) < 1e-11);
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, 2.0, -3.0), DomainError);
}

TEST_CASE("gauss_2f1 complex argument reduces to the real value on the axis")
{
    const double a = 4.0, b = -2.0 / 2.7, c = 1.0 - 2.0 / 2.7;
    for (double x : {-0.4, -2.0, -50.0}) {
        const auto zc = gauss_2f1(a, b, c, std::complex<double>(x, 0.0));
        CHECK(rel_err(zc.real(), gauss_2f1(a, b, c, x)) < 1e-12);
        CHECK(std::abs(zc.imag()) < 1e-12 * std::abs(zc.real()));
    }
}

TEST_CASE("solve_cubic textbook polynomials")
{
    for (auto m : {CubicMethod::radical, CubicMethod::companion}) {
        auto r = solve_cubic(1.0, -6.0, 11.0, -6.0, m);
        REQUIRE(r.size() == 3);
        CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(r[2] == doctest::Approx(3.0).epsilon(1e-12));
        r = solve_cubic(1.0, 0.0, -1.0, 0.0, m);
        REQUIRE(r.size() == 3);
        CHECK(std::abs(r[0] + 1.0) < 1e-12);
        CHECK(std::abs(r[1]) < 1e-12);
        CHECK(std::abs(r[2] - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(solve_cubic(0.0, 1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("solve_cubic radical and companion agree on the radar cubic")
{
    const auto c = objective_coefficients(NetworkConfig{}, PowerModel{});
    const auto cube = optimal_density_radar_only(c, 4);
    for (const auto& p : {cube.branch1, cube.branch2}) {
        const auto r = solve_cubic_radical(p[0], p[1], p[2], p[3]);
        const auto q = solve_cubic_companion(p[0], p[1], p[2], p[3]);
        REQUIRE(r.size() == q.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            CHECK(std::abs(r[i] - q[i]) < 1e-9);
            const double res = ((p[0] * r[i] + p[1]) * r[i] + p[2]) * r[i] + p[3];
            CHECK(std::abs(res) < 1e-9 * std::max(1.0, std::abs(p[3])));
        }
    }
}

TEST_CASE("solve_cubic paths agree on 1000 random cubics")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ur(-1000.0, 1000.0), uim(1.0, 100.0), ulead(0.1, 10.0);
    std::bernoulli_distribution three(0.5);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const double k = ulead(rng);
        double a2, a1, a0;
        if (three(rng)) {
            const double x1 = ur(rng), x2 = ur(rng), x3 = ur(rng);
            a2 = -(x1 + x2 + x3);
            a1 = x1 * x2 + x1 * x3 + x2 * x3;
            a0 = -x1 * x2 * x3;
        } else {
            const double x1 = ur(rng), re = ur(rng), im = uim(rng);
            // (x - x1)(x^2 - 2 re x + re^2 + im^2)
            const double q = re * re + im * im;
            a2 = -(x1 + 2.0 * re);
            a1 = q + 2.0 * re * x1;
            a0 = -x1 * q;
        }
        const auto r = solve_cubic_radical(k, k * a2, k * a1, k * a0);
        const auto q = solve_cubic_companion(k, k * a2, k * a1, k * a0);
        bool same = r.size() == q.size();
        for (std::size_t j = 0; same && j < r.size(); ++j)
            same = std::abs(r[j] - q[j]) < 1e-8;
        mismatches += same ? 0 : 1;
    }
    CHECK(mismatches == 0);
}
