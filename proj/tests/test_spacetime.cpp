#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gffads/errors.hpp"
#include "gffads/spacetime.hpp"

using namespace gffads;

TEST_CASE("interval and causal classes") {
    MinkVector a{0, 0}, b{2, 1}, c{1, 3}, l{1, 1};
    CHECK(interval(a, b) == doctest::Approx(3));
    CHECK((classify(b, a) == CausalClass::timelike_future));
    CHECK((classify(a, b) == CausalClass::timelike_past));
    CHECK((classify(a, c) == CausalClass::spacelike));
    CHECK((classify(a, l) == CausalClass::lightlike));
    CHECK_THROWS(dot(MinkVector{1, 2}, MinkVector{1, 2, 3}));
}

TEST_CASE("boosts and rotations preserve the interval") {
    MinkVector x{0.7, -1.2, 0.4};
    for (double r : {-2.0, 0.3, 1.5}) {
        CHECK(dot(boost(x, 1, r), boost(x, 1, r)) == doctest::Approx(dot(x, x)).epsilon(1e-12));
        CHECK(dot(rotate(x, 1, 2, r), rotate(x, 1, 2, r)) == doctest::Approx(dot(x, x)).epsilon(1e-12));
    }
}

TEST_CASE("embedding and chordal distance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> Z(0.2, 3), X(-2, 2);
    for (int i = 0; i < 50; ++i) {
        AdSPoint p{Z(rng), MinkVector{X(rng), X(rng)}}, q{Z(rng), MinkVector{X(rng), X(rng)}};
        auto ep = embed(p), eq = embed(q);
        CHECK(embeddingDot(ep, ep) == doctest::Approx(1).epsilon(1e-12));
        CHECK(chordalDistance(p, q) == doctest::Approx(embeddingDot(ep, eq) - 1).epsilon(1e-9));
        double u = (-interval(p.x, q.x) + (p.z - q.z) * (p.z - q.z)) / (2 * p.z * q.z);
        CHECK(chordalDistance(p, q) == doctest::Approx(u).epsilon(1e-12));
    }
}

TEST_CASE("AdS isometries preserve the chordal distance") {
    AdSPoint p{0.8, MinkVector{0.1, 0.3}}, q{1.3, MinkVector{-0.2, 0.5}};
    double u = chordalDistance(p, q);
    MinkVector b{0.05, 0.1};
    auto p2 = adsSpecialConformal(p, b), q2 = adsSpecialConformal(q, b);
    CHECK(chordalDistance(p2, q2) == doctest::Approx(u).epsilon(1e-11));
    CHECK(chordalDistance(adsDilate(p, 2.5), adsDilate(q, 2.5)) == doctest::Approx(u).epsilon(1e-12));
    // at z -> 0 the bulk map reduces to the boundary one
    AdSPoint e{1e-7, MinkVector{0.1, 0.3}};
    auto be = adsSpecialConformal(e, b).x, bx = boundarySpecialConformal(e.x, b);
    CHECK(be[0] == doctest::Approx(bx[0]).epsilon(1e-9));
    CHECK(be[1] == doctest::Approx(bx[1]).epsilon(1e-9));
}

TEST_CASE("chart exits and invalid points") {
    // 1 - 2 b.x + b^2 (x^2 - z^2) = -z^2 at b = x = (1, 0)
    AdSPoint p{1e-9, MinkVector{1, 0}};
    CHECK_THROWS_AS(adsSpecialConformal(p, MinkVector{1, 0}), ChartExit);
    CHECK_THROWS(validate(AdSPoint{-1.0, MinkVector{0, 0}}));
}
