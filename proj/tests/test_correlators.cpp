#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gffads/correlators.hpp"
#include "gffads/errors.hpp"
#include "gffads/quadrature.hpp"
#include "gffads/specfun.hpp"

using namespace gffads;

namespace {
constexpr double pi = 3.14159265358979323846;

WeightFunction bump(double c, double w) {
    return WeightFunction::custom([=](double m2) { return std::exp(-0.5 * (m2 - c) * (m2 - c) / (w * w)); }, "bump",
                                  std::max(0.0, c - 9 * w), c + 9 * w);
}

// F(r) = int conj(f1(y + r)) f2(y) dy for one coordinate of two Gaussians of the
// same width s; entire in r. eta is the metric sign of the coordinate.
cplx overlap1d(cplx r, double c1, double c2, double k1, double k2, double s, double eta) {
    const double beta = eta * (k1 - k2);
    const cplx i(0, 1);
    return std::sqrt(pi) * s * std::exp(-(r - c1 + c2) * (r - c1 + c2) / (4 * s * s)) * std::exp(i * eta * k1 * r) *
           std::exp(-i * beta * (r - c1 - c2) / 2.0) * std::exp(-beta * beta * s * s / 4);
}
} // namespace

TEST_CASE("wightmanKG against the mode integral at finite eps") {
    const double m = 1.3, eps = 0.3;
    for (MinkVector x : {MinkVector{0.2, 1.1}, MinkVector{1.4, 0.3}, MinkVector{-0.7, 0.2}}) {
        const CplxFn f = [&](double k) {
            double w = std::sqrt(k * k + m * m);
            return std::exp(cplx(-w * eps, -w * x[0] + k * x[1])) / (2 * w) / (2 * pi);
        };
        auto q = adaptiveFinite(f, -160, 160, 1e-12);
        auto w = wightmanKG(m, x, 2, eps);
        CHECK(std::abs(w.value - q.value) < 1e-9 * std::abs(q.value));
    }
}

TEST_CASE("commutator function") {
    MinkVector x{1.3, 0.4};
    cplx c = commutatorKG(2, x, 2).value;
    cplx w = wightmanKG(2, x, 2, 1e-7).value - wightmanKG(2, -x, 2, 1e-7).value;
    CHECK(std::abs(c - w) < 1e-5 * std::abs(c));
    CHECK(commutatorKG(2, MinkVector{0.2, 1.0}, 2).value == cplx(0.0));
    CHECK_THROWS_AS(commutatorKG(2, MinkVector{1.0, 1.0}, 2), LightConeProximity);
    // odd in x
    CHECK(std::abs(commutatorKG(2, -x, 2).value + c) < 1e-14);
}

TEST_CASE("massless sum from the lightcone factorization") {
    // int_{V+} d^2k e^{-ik(x - i eps e0)} / 2pi factorizes in k+, k- into -1 / (pi (x - i eps e0)^2)
    auto O = WeightFunction::one();
    for (MinkVector x : {MinkVector{0.2, 1.0}, MinkVector{1.0, 0.4}, MinkVector{-0.5, 0.1}}) {
        const double eps = 0.05;
        cplx z(x[0], -eps);
        cplx exact = 1.0 / (pi * (x[1] * x[1] - z * z));
        auto g = gff2pt(O, O, x, 2, eps);
        CHECK(std::abs(g.value - exact) < 1e-7 * std::abs(exact));
    }
    auto k = kallenLehmann2pt(MassWeight::lebesgue(), MinkVector{0.2, 1.0}, 2, 1e-9);
    CHECK(std::abs(k.value.real() - 1 / (pi * 0.96)) < 1e-8);
}

TEST_CASE("power weights: amplitude and slope") {
    for (double nu : {0.5, 1.0}) {
        auto P = WeightFunction::power(nu);
        const double C = std::pow(4.0, nu) * std::pow(gffads::gamma(nu + 1), 2) / pi;
        for (double r2 : {0.5, 5.0, 50.0}) {
            auto c = gff2pt(P, P, MinkVector{0, std::sqrt(r2)}, 2, 1e-9);
            CHECK(std::abs(c.value.real() / (C * std::pow(r2, -1 - nu)) - 1) < 1e-8);
        }
    }
}

TEST_CASE("weighted field agrees with its Kallen-Lehmann measure") {
    auto h = bump(2.0, 0.5);
    MinkVector x{0.3, 0.9};
    auto a = gff2pt(h, h, x, 2, 1e-9), b = kallenLehmann2pt(MassWeight::fromWeight(h), x, 2, 1e-9);
    CHECK(std::abs(a.value - b.value) < 1e-9 * std::abs(a.value));
    // threshold density through the substitution m^2 = M^2 + t^2
    const double M2 = 1.5;
    auto th = kallenLehmann2pt(MassWeight::threshold(M2), x, 2, 1e-9, 60.0);
    const CplxFn f = [&](double t) { return 2.0 * wightmanKG(std::sqrt(M2 + t * t), x, 2, 1e-9).value; };
    auto q = adaptiveFinite(f, 0, std::sqrt(60.0 - M2), 1e-11);
    CHECK(std::abs(th.value - q.value) < 1e-7 * std::abs(q.value));
}

TEST_CASE("smeared two-point function against the position-space double integral") {
    // same-width Gaussians; the x0 contour is moved to Im = -a, where the kernel is smooth
    const double s = 1.0, a = 1.0;
    MinkVector c1{0.2, -0.1}, c2{-0.3, 0.4}, k1{2.0, 0.5}, k2{2.5, -0.3};
    auto f1 = TestFunction::gaussian(c1, s, k1), f2 = TestFunction::gaussian(c2, s, k2);
    std::vector<double> x, w;
    compositeGauss(-12, 12, 48, 20, x, w);
    cplx sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cplx z(x[i], -a);
        cplx F0 = overlap1d(z, c1[0], c2[0], k1[0], k2[0], s, 1.0);
        for (std::size_t j = 0; j < x.size(); ++j) {
            double r1 = x[j];
            cplx F1 = overlap1d(r1, c1[1], c2[1], k1[1], k2[1], s, -1.0);
            sum += w[i] * w[j] * F0 * F1 / (pi * (r1 * r1 - z * z));
        }
    }
    auto O = WeightFunction::one();
    auto sm = smeared2pt(O, f1, O, f2, 2);
    CHECK(std::abs(sm.value - sum) < 1e-8 * std::abs(sum));
    // hermitean: swapping the packets conjugates
    auto sw = smeared2pt(O, f2, O, f1, 2);
    CHECK(std::abs(sw.value - std::conj(sm.value)) < 1e-12 * std::abs(sm.value));
}

TEST_CASE("dilation covariance") {
    for (double lam : {0.5, 2.0, 3.0}) {
        auto r = scalingCovarianceCheck(WeightFunction::besselZ(1.0, 0.5, 2), lam, MinkVector{0.3, 1.1}, 2, 1e-9);
        CHECK(r.pass);
        auto p = scalingCovarianceCheck(WeightFunction::power(0.5), lam, MinkVector{0.3, 1.1}, 2, 1e-9);
        CHECK(p.pass);
        REQUIRE(p.power_prediction.has_value());
        CHECK(std::abs(*p.power_prediction - p.direct) < 1e-8 * std::abs(p.direct));
    }
    auto h = WeightFunction::power(0.5).scaled(2.0, 2);
    CHECK(h(0.7) == doctest::Approx(2.0 * std::pow(4 * 0.7, 0.25)).epsilon(1e-14));
}

TEST_CASE("commutator of a weighted field") {
    auto h = bump(2.0, 0.5);
    MinkVector x{1.2, 0.3};
    auto c = gffCommutator(h, h, x, 2);
    cplx d = gff2pt(h, h, x, 2, 1e-8).value - gff2pt(h, h, -x, 2, 1e-8).value;
    CHECK(std::abs(c.value - d) < 1e-6 * std::abs(d));
    CHECK(gffCommutator(h, h, MinkVector{0.3, 1.2}, 2).value == cplx(0.0));
}

TEST_CASE("generalized Wick square") {
    auto h = bump(2.0, 0.5);
    MinkVector x{0.0, 0.8};
    auto g = gff2pt(h, h, x, 2, 1e-9).value;
    auto w = wick2pt(PairWeight::product(h, h), x, 2, 1e-9).value;
    CHECK(std::abs(w - 2.0 * g * g) < 1e-8 * std::abs(w));
    double prev = 1e300;
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
        double v = std::abs(wick2pt(PairWeight::product(h, h), MinkVector{0.0, r}, 2, 1e-9).value);
        CHECK(v < prev);
        prev = v;
    }
    PairWeight d;
    d.diagonal_delta = true;
    CHECK_THROWS_AS(wick2pt(d, x, 2, 1e-9), DivergenceError);
}

TEST_CASE("tabulated weights from a file") {
    const char* path = "test_weight_table.txt";
    {
        std::ofstream out(path);
        out << "# m^2  h\n0 0\n1 2   # peak\n3 0\n";
    }
    auto h = WeightFunction::tabulatedFromFile(path);
    CHECK(h(0.5) == doctest::Approx(1.0));
    CHECK(h(2.0) == doctest::Approx(1.0));
    CHECK(h(5.0) == 0.0);
    CHECK(h.support().second == doctest::Approx(3.0));
    std::remove(path);
    CHECK_THROWS(WeightFunction::tabulatedFromFile("does_not_exist.txt"));
    CHECK_THROWS(WeightFunction::tabulated({1.0, 0.5}, {0.0, 1.0}));
}
