#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gffads/quadrature.hpp"
#include "gffads/specfun.hpp"

using namespace gffads;

namespace {
constexpr double pi = 3.14159265358979323846;
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("gamma at the tabulated points and poles") {
    CHECK(rel(gffads::gamma(1.0), 1.0) < 1e-13);
    CHECK(rel(gffads::gamma(0.5), std::sqrt(pi)) < 1e-13);
    CHECK(rel(gffads::gamma(5.0), 24.0) < 1e-13);
    CHECK(rel(gffads::gamma(-0.5), -2 * std::sqrt(pi)) < 1e-13);
    // Gamma(x+1) = x Gamma(x) across [0.1, 50]
    for (double x = 0.1; x < 49; x *= 1.31) CHECK(rel(gffads::gamma(x + 1), x * gffads::gamma(x)) < 1e-13);
    CHECK_THROWS_AS(gffads::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(gffads::gamma(-3.0), std::domain_error);
}

TEST_CASE("besselJ against elementary half-integer forms") {
    CHECK(besselJ(0, 0) == 1.0);
    for (double u : {0.5, 1.0, 5.0, 20.0, 80.0, 150.0, 199.0}) {
        double env = std::sqrt(2 / (pi * u));
        CHECK(std::abs(besselJ(0.5, u) - env * std::sin(u)) < 1e-10 * env);
        CHECK(std::abs(besselJ(-0.5, u) - env * std::cos(u)) < 1e-10 * env);
        CHECK(std::abs(besselJ(1.5, u) - env * (std::sin(u) / u - std::cos(u))) < 1e-10 * env);
    }
}

TEST_CASE("besselJ against frozen arbitrary-precision values") {
    struct R { double nu, u, v; };
    // mpmath besselj, 30 digits
    const R refs[] = {{0, 0.3, 0.97762624653829608922},     {0, 7, 0.30007927051955559665},
                      {5, 40, 0.12257346597711778699},      {1, 120, -0.011805211433001891117},
                      {2.5, 150, 0.045654764420159423285},  {10, 3, 0.000012928351645715883778},
                      {0.7, 199, -0.03921544974449310575}};
    for (const auto& r : refs) CHECK(rel(besselJ(r.nu, r.u), r.v) < 1e-10);
}

TEST_CASE("besselJ integer orders against the Bessel integral") {
    for (int n : {0, 1, 5})
        for (double u : {0.3, 7.0, 40.0}) {
            const RealFn f = [=](double t) { return std::cos(n * t - u * std::sin(t)) / pi; };
            auto q = adaptiveFinite(f, 0, pi, 1e-13);
            CHECK(std::abs(besselJ(n, u) - q.value.real()) < 1e-12);
        }
}

TEST_CASE("besselJ small-argument limit") {
    for (double nu : {0.0, 0.5, 1.3, 4.0})
        CHECK(rel(besselJ(nu, 1e-7) / std::pow(1e-7, nu), std::pow(2.0, -nu) / gffads::gamma(nu + 1)) < 1e-10);
}

TEST_CASE("Bessel ODE and recurrence") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> N(-0.9, 6.0), U(0.3, 40.0);
    for (int i = 0; i < 40; ++i) {
        // roundoff in J grows like u^2 / h^2, the stencil error like u^2 h^4
        double nu = N(rng), u = U(rng), h = u < 10 ? 2e-3 : 1e-2;
        auto J = [&](double x) { return besselJ(nu, x); };
        double d1 = (-J(u + 2 * h) + 8 * J(u + h) - 8 * J(u - h) + J(u - 2 * h)) / (12 * h);
        double d2 = (-J(u + 2 * h) + 16 * J(u + h) - 30 * J(u) + 16 * J(u - h) - J(u - 2 * h)) / (12 * h * h);
        double res = u * u * d2 + u * d1 + (u * u - nu * nu) * J(u);
        CHECK(std::abs(res) <= 1e-6 * std::max(1.0, std::abs(J(u))));
    }
    for (double nu : {0.5, 1.3, 3.0})
        for (double u = 0.1; u < 50; u *= 1.5) {
            double a = besselJ(nu - 1, u), b = besselJ(nu + 1, u), c = 2 * nu / u * besselJ(nu, u);
            CHECK(std::abs(a + b - c) < 1e-9 * std::max({std::abs(a), std::abs(b), std::abs(c)}));
        }
}

TEST_CASE("besselK closed forms, integral representation, frozen values") {
    for (double u : {0.1, 1.0, 10.0}) CHECK(rel(besselK(0.5, u), std::sqrt(pi / (2 * u)) * std::exp(-u)) < 1e-10);
    for (double nu : {0.3, 1.7})
        for (double u : {0.05, 1.0, 20.0}) {
            const RealFn f = [=](double t) { return std::exp(-u * std::cosh(t)) * std::cosh(nu * t); };
            auto q = adaptiveFinite(f, 0, 12, 1e-13);
            CHECK(rel(besselK(nu, u), q.value.real()) < 1e-10);
        }
    CHECK(rel(besselK(0.3, 0.05), 3.8119663367691106986) < 1e-10);
    CHECK(rel(besselK(1.7, 20), 6.1605837901883487337e-10) < 1e-10);
    CHECK(besselK(-0.3, 2.0) == doctest::Approx(besselK(0.3, 2.0)).epsilon(1e-14));
    CHECK_THROWS(besselK(0.5, 0.0));
    CHECK_THROWS(besselK(0.5, -1.0));
}

TEST_CASE("besselI and jEven") {
    auto seriesI = [](double nu, double u) {
        double s = 0;
        for (int n = 0; n < 60; ++n) s += std::pow(u / 2, 2 * n + nu) / (std::tgamma(n + 1.0) * std::tgamma(nu + n + 1));
        return s;
    };
    for (double u : {0.5, 2.0, 6.0}) CHECK(rel(besselI(0.7, u), seriesI(0.7, u)) < 1e-12);
    CHECK(rel(jEven(0.7, 0), std::pow(2.0, -0.7) / gffads::gamma(1.7)) < 1e-13);
    for (double u : {0.5, 2.0, 8.0}) CHECK(rel(std::pow(u, 0.7) * jEven(0.7, u * u), besselJ(0.7, u)) < 1e-10);
    CHECK(rel(jEven(0.7, -4.0), std::pow(2.0, -0.7) * seriesI(0.7, 2.0)) < 1e-12);
    CHECK_THROWS_AS(jEven(0.0, -1e7), std::range_error);
}

TEST_CASE("complex K_n against frozen arbitrary-precision values") {
    struct R { int n; double a, b, re, im; };
    // mpmath besselk at complex argument, 30 digits
    const R refs[] = {
        {0, 0.5, 0.3, 0.76067977866595654, -0.43410456982107325},
        {0, 0.001, 3.0, -0.59142222984549283, 0.40797895105270155},
        {0, 5, 20, -0.00043553203037350029, -0.0018051406991114364},
        {0, 0.01, 0.01, 4.3745673776031182, -0.78512943650102769},
        {0, 2.5, -1.7, -0.022811477253349367, 0.052593498697980954},
        {0, 12, 0.5, 1.9086618945312189e-6, -1.0938917560615442e-6},
        {1, 0.5, 0.3, 1.0955258713956809, -0.94472266890989855},
        {1, 0.001, 30, 0.18634516003280638, 0.13248599063185007},
        {1, 0.01, 0.01, 49.971700973524534, -50.020446450975154},
        {1, 0.2, 7.0, 0.011693320060967735, -0.3896171627014554},
        {2, 0.5, 0.3, 2.3156570435181384, -5.1459816043719765},
        {2, 0.01, 0.01, -0.49998036745891493, -9999.9998718864696},
        {2, 2.5, -1.7, -0.060764325534391918, 0.072873727529066036},
    };
    for (const auto& r : refs) {
        cplx v = besselKc(r.n, cplx(r.a, r.b)), e(r.re, r.im);
        CHECK(std::abs(v - e) <= 1e-12 * std::abs(e));
    }
    cplx w(0.7, 2.0);
    CHECK(std::abs(besselKc(0.5, w) - std::sqrt(pi / (2.0 * w)) * std::exp(-w)) < 1e-14);
}
