#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gffads/specfun.hpp"
#include "gffads/stress.hpp"

using namespace gffads;

namespace {
WeightFunction bump(double c, double w) {
    return WeightFunction::custom([=](double m2) { return std::exp(-0.5 * (m2 - c) * (m2 - c) / (w * w)); }, "bump",
                                  std::max(0.0, c - 9 * w), c + 9 * w);
}

MinkVector onShell(double m, double y) { return {m * std::cosh(y), m * std::sinh(y)}; }
} // namespace

TEST_CASE("kernel trace and coincidence worked by hand") {
    // eta^{mu nu} K_mu_nu = k1^2 + k2^2 + 2 kappa q^2, off shell as well
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> M(0.1, 3), Y(-2, 2);
    for (int i = 0; i < 50; ++i) {
        MinkVector k1 = onShell(M(rng), Y(rng)), k2 = onShell(M(rng), Y(rng));
        for (int e1 : {1, -1})
            for (int e2 : {1, -1})
                for (double kap : {0.0, 0.7}) {
                    MinkVector q = double(e1) * k1 + double(e2) * k2;
                    double tr = setKernel(k1, k2, e1, e2, 0, 0, kap) - setKernel(k1, k2, e1, e2, 1, 1, kap);
                    double want = dot(k1, k1) + dot(k2, k2) + 2 * kap * dot(q, q);
                    CHECK(std::abs(tr - want) < 1e-12 * std::max(1.0, std::abs(want)));
                }
    }
    MinkVector k{1.7, -0.4};
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            CHECK(setKernel(k, k, 1, -1, mu, nu) == doctest::Approx(2 * k.lower(mu) * k.lower(nu)).epsilon(1e-14));
    CHECK_THROWS_AS(setKernel(MinkVector{1, 2}, k, 1, -1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(setKernel(MinkVector{-1, 0}, k, 1, -1, 0, 0), std::invalid_argument);
}

TEST_CASE("kernel conservation across a wide momentum range") {
    // the kernel components cancel at large relative rapidity, so the residual is
    // measured against the rounding scale |q| (|k1|^2 + |k2|^2), Euclidean norms
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> L(std::log(0.05), std::log(20.0)), Y(-4, 4);
    double worst = 0;
    for (int i = 0; i < 2000; ++i) {
        double m = std::exp(L(rng));
        MinkVector k1 = onShell(m, Y(rng)), k2 = onShell(m, Y(rng));
        for (int e1 : {1, -1})
            for (int e2 : {1, -1}) {
                MinkVector q = double(e1) * k1 + double(e2) * k2;
                double sc = std::hypot(q[0], q[1]) * (k1[0] * k1[0] + k1[1] * k1[1] + k2[0] * k2[0] + k2[1] * k2[1]);
                for (int nu = 0; nu < 2; ++nu) {
                    double a = q[0] * setKernel(k1, k2, e1, e2, 0, nu), b = q[1] * setKernel(k1, k2, e1, e2, 1, nu);
                    worst = std::max(worst, std::abs(a + b) / sc);
                }
            }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("z-integral weight: Lommel form against quadrature") {
    for (double nu : {0.0, 0.5, 1.3})
        for (double Z : {2.0, 15.0})
            for (auto mm : {std::pair{1.0, 2.0}, {0.3, 0.31}, {4.0, 1.0}}) {
                double a = zIntegralWeight(nu, Z, mm.first, mm.second);
                double b = zIntegralWeightLommel(nu, Z, mm.first, mm.second);
                CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
            }
    // diagonal: (Z^2/4)(J_nu^2 - J_{nu-1} J_{nu+1}) at m = 1
    for (double nu : {0.5, 1.3}) {
        double Z = 7.0;
        double e = 0.25 * Z * Z * (besselJ(nu, Z) * besselJ(nu, Z) - besselJ(nu - 1, Z) * besselJ(nu + 1, Z));
        CHECK(zIntegralWeight(nu, Z, 1.0, 1.0) == doctest::Approx(e).epsilon(1e-10));
    }
}

TEST_CASE("z-integral weight tends to the delta weight") {
    double prev = 1e300;
    for (double Z : {25.0, 50.0, 100.0, 200.0}) {
        auto d = zIntegralDeltaCheck(0.5, Z, 1.0, 1.1, 0.2);
        CHECK(d.rel_error < prev);
        prev = d.rel_error;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("oriented matrix elements") {
    auto one = WeightFunction::one();
    auto f2 = TestFunction::gaussian(MinkVector{0, 0}, 2.0, MinkVector{3.2, 1.0});
    auto f1 = f2.conjugate();
    auto f = TestFunction::gaussian(MinkVector{0.3, -0.2}, 1.0, MinkVector{0, 0});
    auto a = setMatrixElement(f, one, f1, one, f2, 0, 1, 2), b = setMatrixElement(f, one, f1, one, f2, 1, 0, 2);
    CHECK(std::abs(a.value - b.value) < 1e-12 * std::abs(a.value));
    // swapping bra and ket conjugates a real smearing
    auto g1 = TestFunction::gaussian(MinkVector{0.4, 0}, 2.0, MinkVector{-3, -0.5});
    auto c = setMatrixElement(f, one, g1, one, f2, 0, 0, 2), d = setMatrixElement(f, one, f2.conjugate(), one,
                                                                                    g1.conjugate(), 0, 0, 2);
    CHECK(std::abs(c.value - std::conj(d.value)) < 1e-9 * std::abs(c.value));
    auto r = conservationCheck(f, one, f1, one, f2, 1, 2, Ordering::Middle);
    CHECK(r.pass);
}

TEST_CASE("trace is suppressed for weights near zero mass") {
    auto f2 = TestFunction::gaussian(MinkVector{0, 0}, 2.0, MinkVector{3.2, 1.0});
    auto f = TestFunction::gaussian(MinkVector{0.3, -0.2}, 1.0, MinkVector{0, 0});
    auto ratio = [&](const WeightFunction& h) {
        auto r = traceCheck(h, f2.conjugate(), h, f2, f);
        return std::abs(r.trace) / (std::abs(r.me00) + std::abs(r.me11));
    };
    double light = ratio(bump(0.04, 0.01)), heavy = ratio(bump(4.0, 0.8));
    CHECK(light < 0.05 * heavy);
    CHECK(heavy > 1e-3);
}

TEST_CASE("Lorentz generator is antisymmetric") {
    auto one = WeightFunction::one();
    auto g2 = TestFunction::gaussian(MinkVector{0, 1.5}, 2.0, MinkVector{3.2, 1.0});
    cplx a = oneParticleElement(GeneratorKind::M(0, 1), one, g2.conjugate(), one, g2);
    cplx b = oneParticleElement(GeneratorKind::M(1, 0), one, g2.conjugate(), one, g2);
    CHECK(std::abs(a + b) < 1e-14 * std::abs(a));
    CHECK(std::abs(a) > 0);
}

TEST_CASE("sampled estimate is deterministic in the seed") {
    auto one = WeightFunction::one();
    auto f2 = TestFunction::gaussian(MinkVector{0, 0}, 2.0, MinkVector{3.2, 1.0});
    auto g = TestFunction::gaussian(MinkVector{0, 0}, 1.0, MinkVector{0, 0});
    MonteCarloOptions o;
    o.samples = 200000;
    o.seed = 3;
    o.threads = 1;
    auto a = setMatrixElementMC(g, one, f2.conjugate(), one, f2, 0, 0, o);
    o.threads = 2;
    auto b = setMatrixElementMC(g, one, f2.conjugate(), one, f2, 0, 0, o);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
    o.seed = 4;
    auto c = setMatrixElementMC(g, one, f2.conjugate(), one, f2, 0, 0, o);
    CHECK(c.value != a.value);
    auto q = setMatrixElement(g, one, f2.conjugate(), one, f2, 0, 0, 2);
    CHECK(std::abs(a.value.real() - q.value.real()) < 5 * a.error_estimate);
    CHECK(std::abs(c.value.real() - q.value.real()) < 5 * c.error_estimate);
}

TEST_CASE("improvement term leaves the momentum density alone") {
    auto one = WeightFunction::one();
    auto f2 = TestFunction::gaussian(MinkVector{0, 0}, 2.0, MinkVector{3.2, 1.0});
    SETOptions imp;
    imp.improvement = 0.7;
    auto r = momentumDensityCheck(one, f2.conjugate(), one, f2, 0, {4, 16, 32}, 1.0, 1e-2, imp);
    CHECK(r.pass);
    auto p = momentumDensityCheck(one, f2.conjugate(), one, f2, 0, {4, 16, 32}, 1.0, 1e-2);
    CHECK(std::abs(r.rows.back().value - p.rows.back().value) < 1e-3 * std::abs(p.limit));
}
