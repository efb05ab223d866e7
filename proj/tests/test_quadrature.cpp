#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gffads/errors.hpp"
#include "gffads/quadrature.hpp"
#include "gffads/specfun.hpp"

using namespace gffads;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("adaptiveFinite basics") {
    const RealFn sq = [](double x) { return x * x; };
    const RealFn sn = [](double x) { return std::sin(x); };
    auto a = adaptiveFinite(sq, 0, 1, 1e-12);
    CHECK(std::abs(a.value.real() - 1.0 / 3) < 1e-14);
    CHECK(a.evaluations > 0);
    CHECK(std::abs(adaptiveFinite(sn, 0, pi, 1e-12).value.real() - 2) < 1e-13);
    // term-by-term integrated series of J0(10x)
    double s = 0;
    for (int n = 0; n < 80; ++n) s += std::pow(-25.0, n) / (std::tgamma(n + 1.0) * std::tgamma(n + 1.0) * (2 * n + 1));
    const RealFn j = [](double x) { return besselJ(0, 10 * x); };
    auto c = adaptiveFinite(j, 0, 1, 1e-13);
    CHECK(std::abs(c.value.real() - s) < 1e-10 * std::abs(s));
    CHECK(c.error_estimate >= 0);
}

TEST_CASE("adaptiveFinite budget exhaustion carries the best estimate") {
    const RealFn bad = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)) * std::sin(1 / (x - 0.3)); };
    FiniteOptions o;
    o.max_evaluations = 500;
    try {
        adaptiveFinite(bad, 0, 1, 1e-14, o);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(std::isfinite(e.best_estimate.real()));
        CHECK(e.error_estimate > 0);
    }
}

TEST_CASE("Abel-regularized semi-infinite integrals") {
    auto e = oscillatorySemiInfinite([](double u) { return cplx(std::exp(-u)); }, AbelSchedule::standard());
    CHECK(std::abs(e.value.real() - 1) <= e.error_estimate);
    auto f = oscillatorySemiInfinite([](double u) { return cplx(besselJ(0, u)); }, AbelSchedule::fine());
    CHECK(std::abs(f.value.real() - 1) < 1e-9);
    auto g = oscillatorySemiInfinite([](double u) { return cplx(u < 1e-8 ? 1.0 : std::sin(u) / u); },
                                     AbelSchedule::fine());
    CHECK(std::abs(g.value.real() - pi / 2) < 1e-9);
    // the damped J0 integrals themselves match 1/sqrt(1 + eps^2)
    auto t = abelDamped([](double u) { return cplx(besselJ(0, u)); }, {0.2, 0.05});
    CHECK(std::abs(t.values[0].real() - 1 / std::sqrt(1 + 0.04)) < 1e-11);
    CHECK(std::abs(t.values[1].real() - 1 / std::sqrt(1 + 0.0025)) < 1e-11);
}

TEST_CASE("two schedules agree within their combined error") {
    const CplxFn f = [](double u) { return cplx(besselJ(0, 2 * u) * std::cos(u)); };
    auto a = oscillatorySemiInfinite(f, AbelSchedule::standard());
    auto b = oscillatorySemiInfinite(f, AbelSchedule::geometric(0.1, 6, 4));
    CHECK(std::abs(a.value - b.value) <= a.error_estimate + b.error_estimate);
    // int_0^inf J0(2u) cos(u) du = 1/sqrt(4 - 1)
    CHECK(std::abs(b.value.real() - 1 / std::sqrt(3.0)) <= b.error_estimate + 1e-9);
}

TEST_CASE("non-summable input is reported as divergence") {
    const CplxFn f = [](double u) { return cplx(u * u); };
    CHECK_THROWS_AS(oscillatorySemiInfinite(f, AbelSchedule::standard()), DivergenceError);
}

TEST_CASE("linearity of the engines") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int i = 0; i < 4; ++i) {
        double a = U(rng), b = U(rng), w = 1 + std::abs(U(rng));
        const RealFn f = [w](double x) { return std::exp(-w * x * x); };
        const RealFn g = [w](double x) { return std::cos(w * x); };
        const RealFn h = [&](double x) { return a * f(x) + b * g(x); };
        double lhs = adaptiveFinite(h, 0, 3, 1e-13).value.real();
        double rhs = a * adaptiveFinite(f, 0, 3, 1e-13).value.real() + b * adaptiveFinite(g, 0, 3, 1e-13).value.real();
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        const CplxFn F = [](double u) { return cplx(besselJ(0, u)); };
        const CplxFn G = [](double u) { return cplx(std::exp(-u) * std::sin(u)); };
        const CplxFn H = [&](double u) { return a * F(u) + b * G(u); };
        auto s = AbelSchedule::standard();
        cplx l = oscillatorySemiInfinite(H, s).value;
        cplx r = a * oscillatorySemiInfinite(F, s).value + b * oscillatorySemiInfinite(G, s).value;
        CHECK(std::abs(l - r) <= 1e-10 * std::max(1.0, std::abs(l)));
    }
}

TEST_CASE("Hankel transforms") {
    for (double nu : {0.0, 0.5, 1.3})
        for (double u : {0.5, 1.0, 3.0}) {
            const RealFn g = [nu](double t) { return std::pow(t, nu) * std::exp(-0.5 * t * t); };
            double v = hankelTransform(nu, g, u).value.real(), e = std::pow(u, nu) * std::exp(-0.5 * u * u);
            CHECK(std::abs(v - e) <= 1e-8 * e);
        }
    // table formula a^nu (2p)^{-nu-1} exp(-a^2 / 4p) at p = 1
    for (double a : {0.7, 2.0}) {
        const RealFn g = [](double t) { return std::pow(t, 0.5) * std::exp(-t * t); };
        double e = std::pow(a, 0.5) * std::pow(2.0, -1.5) * std::exp(-a * a / 4);
        CHECK(std::abs(hankelTransform(0.5, g, a).value.real() - e) <= 1e-8 * e);
    }
    // involution: the numerically transformed function transformed again, the outer
    // integral on fixed Gauss nodes (H[g] decays like exp(-u^2/4))
    const double nu = 0.5;
    const RealFn g = [nu](double t) { return std::pow(t, nu) * std::exp(-t * t); };
    std::vector<double> x, w, Hg;
    compositeGauss(0, 14, 28, 20, x, w);
    for (double u : x) Hg.push_back(hankelTransform(nu, g, u).value.real());
    for (double t : {0.6, 1.4}) {
        double back = 0;
        for (std::size_t i = 0; i < x.size(); ++i) back += w[i] * x[i] * Hg[i] * besselJ(nu, t * x[i]);
        CHECK(std::abs(back - g(t)) <= 1e-6 * g(t));
    }
    const RealFn zero = [](double) { return 0.0; };
    CHECK(hankelTransform(0.5, zero, 1.0).value == cplx(0.0));
}

TEST_CASE("Gauss-Legendre exactness and schedule validation") {
    const auto& r = gaussLegendre(12);
    for (int p = 0; p < 24; ++p) {
        double s = 0;
        for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], p);
        double e = p % 2 ? 0.0 : 2.0 / (p + 1);
        CHECK(std::abs(s - e) < 1e-14);
    }
    AbelSchedule bad;
    bad.epsilons = {0.1, 0.2};
    CHECK_THROWS(bad.validate());
    bad.epsilons = {0.1, 1e-8};
    CHECK_THROWS(bad.validate());
}

TEST_CASE("Wynn-accelerated panel sums cross-check the Abel value") {
    const CplxFn f = [](double u) { return cplx(besselJ(0, u)); };
    auto p = partitionedOscillatory(f, pi, 40);
    CHECK(std::abs(p.value.real() - 1) < 1e-6);
}
