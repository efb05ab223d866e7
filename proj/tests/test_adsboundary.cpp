#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gffads/adsboundary.hpp"
#include "gffads/errors.hpp"
#include "gffads/specfun.hpp"

using namespace gffads;

namespace {
constexpr double pi = 3.14159265358979323846;

// Euclidean AdS3 Green function, sigma the geodesic distance
double h3Propagator(double nu, double u) {
    double s = std::acosh(1 + u);
    return std::exp(-nu * s) / (4 * pi * std::sinh(s));
}

// int_0^inf J0(a u) cos(beta u) du
double j0cos(double a, double beta) {
    return std::abs(beta) < a ? 1 / std::sqrt(a * a - beta * beta) : 0.0;
}
} // namespace

TEST_CASE("boundary constant") {
    for (double nu : {0.0, 0.5, 1.3}) {
        CHECK(boundaryConstant(nu) == doctest::Approx(jEven(nu, 0) / std::sqrt(2.0)).epsilon(1e-14));
        CHECK(boundaryConstant(nu) == doctest::Approx(std::pow(2.0, -nu - 0.5) / std::tgamma(nu + 1)).epsilon(1e-13));
    }
}

TEST_CASE("bulk two-point function is the AdS3 propagator") {
    struct P { double z, zp, x; };
    for (double nu : {0.0, 0.5, 1.3})
        for (P p : {P{1.0, 1.3, 0.4}, P{0.5, 2.0, 1.0}, P{1.0, 1.0, 3.0}}) {
            auto a = ads2pt(AdSFieldSpec{nu, 2}, p.z, p.zp, MinkVector{0, p.x}, 1e-9);
            double u = chordalDistance(AdSPoint{p.z, MinkVector{0, 0}}, AdSPoint{p.zp, MinkVector{0, p.x}});
            CHECK(std::abs(a.value.real() / h3Propagator(nu, u) - 1) < 1e-9);
        }
}

TEST_CASE("bulk two-point function under AdS isometries") {
    AdSFieldSpec spec{0.5, 2};
    AdSPoint p{0.8, MinkVector{0.1, 0.3}}, q{1.3, MinkVector{-0.2, 1.5}};
    MinkVector b{0.05, 0.1};
    auto p2 = adsSpecialConformal(p, b), q2 = adsSpecialConformal(q, b);
    MinkVector d1{q.x[0] - p.x[0], q.x[1] - p.x[1]}, d2{q2.x[0] - p2.x[0], q2.x[1] - p2.x[1]};
    auto a = ads2pt(spec, p.z, q.z, d1, 1e-9), c = ads2pt(spec, p2.z, q2.z, d2, 1e-9);
    CHECK(std::abs(a.value - c.value) < 1e-8 * std::abs(a.value));
    auto e = ads2pt(spec, 2.5 * p.z, 2.5 * q.z, MinkVector{2.5 * d1[0], 2.5 * d1[1]}, 1e-9);
    CHECK(std::abs(a.value - e.value) < 1e-8 * std::abs(a.value));
}

TEST_CASE("holographic lift is multiplication by the BesselZ weight") {
    auto grid = LightconeGrid::make(160, 20);
    AdSFieldSpec spec{0.5, 2};
    auto f = TestFunction::gaussian(MinkVector{0, 0}, 2.0, MinkVector{5, 1});
    auto fhat = ModeFunction::fromPacket(grid, WeightFunction::one(), f);
    auto lift = holographicLift(spec, 0.7, fhat);
    auto lift2 = holographicLift(spec, 0.7, fhat, LiftPath::JEven);
    auto direct = ModeFunction::fromPacket(grid, WeightFunction::besselZ(0.7, 0.5, 2), f);
    CHECK((lift - direct).norm() < 1e-12 * direct.norm());
    CHECK((lift2 - direct).norm() < 1e-10 * direct.norm());
}

TEST_CASE("damped Bessel product integral") {
    for (double eps : {0.5, 0.1}) {
        double a = 1.1, b = 0.7;
        double e = (eps / (eps * eps + (a - b) * (a - b)) - eps / (eps * eps + (a + b) * (a + b))) / (pi * std::sqrt(a * b));
        CHECK(dampedBesselProduct(0.5, a, b, eps) == doctest::Approx(e).epsilon(1e-9));
        const RealFn g = [&](double z) { return z * std::exp(-eps * z) * besselJ(1.3, a * z) * besselJ(1.3, b * z); };
        double q = adaptiveFinite(g, 0, 60 / eps, 1e-12).value.real();
        CHECK(dampedBesselProduct(1.3, a, b, eps) == doctest::Approx(q).epsilon(1e-8));
    }
}

TEST_CASE("bonus locality integral") {
    // at nu = 1/2 the J_1/2 product is elementary and the J0-cosine integrals close
    auto oracle = [](double a, double b, double c) {
        return (j0cos(a, b - c) - j0cos(a, b + c)) / (pi * std::sqrt(b * c));
    };
    for (double a : {0.3, 1.2, 3.0}) {
        double e = oracle(a, 1.0, 1.4);
        CHECK(std::abs(bonusLocalityHalfInteger(a, 1.0, 1.4) - e) < 1e-14);
        auto r = bonusLocality(0, 0.5, a, 1.0, 1.4);
        CHECK(std::abs(r.value.real() - e) < 1e-5 * std::max(1.0, std::abs(e)));
    }
    // outside the triangle the integral vanishes for any order
    auto in = bonusLocality(0, 0.0, 1.2, 1.0, 1.4), out = bonusLocality(0, 0.0, 0.2, 1.0, 1.4);
    CHECK(std::abs(out.value.real()) < 1e-5 * std::abs(in.value.real()));
    CHECK_THROWS_AS(checkGuardBand(0.405, 1.0, 1.4), LightConeProximity);
    CHECK_NOTHROW(checkGuardBand(0.3, 1.0, 1.4));
}

TEST_CASE("bulk commutator") {
    AdSFieldSpec spec{0.5, 2};
    // spacelike dx
    CHECK(adsCommutator(spec, 1.0, 2.0, MinkVector{0.2, 1.5}).value == cplx(0.0));
    // timelike, but dx^2 < (z - z')^2: the bulk points are spacelike
    CHECK(std::abs(adsCommutator(spec, 1.0, 2.0, MinkVector{0.5, 0.1}).value) < 1e-5);
    MinkVector dx{1.5, 0.2};
    auto c = adsCommutator(spec, 1.0, 2.0, dx);
    cplx d = ads2pt(spec, 1.0, 2.0, dx, 1e-3).value - ads2pt(spec, 1.0, 2.0, -dx, 1e-3).value;
    CHECK(std::abs(c.value - d) < 5e-3 * std::abs(c.value));
    CHECK_THROWS_AS(adsCommutator(spec, 1.0, 2.0, MinkVector{1.0, 0.05}), LightConeProximity);
}

TEST_CASE("canonical commutator") {
    AdSFieldSpec spec{0.5, 2};
    SpatialPacket f{{0.1}, 0.7}, fp{{-0.2}, 0.5};
    auto g = ZProfile::gaussian(1.5, 0.2), gp = ZProfile::gaussian(1.6, 0.25);
    auto a = ccrCheck(spec, g, gp, f, fp);
    CHECK(std::abs(a.value.imag() / a.reference.imag() - 1) < 1e-3);
    // int g(2z) g'(2z) dz is half of int g g' dz
    auto b = ccrCheck(spec, g.scaled(2.0), gp.scaled(2.0), f, fp);
    CHECK(b.reference.imag() / a.reference.imag() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(b.value.imag() / a.value.imag() - 0.5) < 2e-3);
}

TEST_CASE("mass change kernel") {
    auto r = massChangeKernelCheck(0.5, 1.5, 1.0, 1.0, 2);
    CHECK(r.rel_error < 1e-5);
    CHECK(r.reference == doctest::Approx(std::sqrt(0.5) * besselJ(0.5, 1.0)).epsilon(1e-12));
}
