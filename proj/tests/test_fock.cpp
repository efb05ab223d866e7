#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gffads/fock.hpp"

using namespace gffads;

namespace {
const cplx I(0, 1);

double coeffErr(const sym::Decomposition& d, int k, cplx want) {
    double e = std::abs(d.coeffs[k] - want);
    for (int i = 0; i < 7; ++i)
        if (i != k) e = std::max(e, std::abs(d.coeffs[i]));
    return std::max(e, d.residual);
}
} // namespace

TEST_CASE("symbolic commutators worked by hand") {
    using sym::commutator;
    auto op = [](const GeneratorKind& g) { return sym::generatorOperator(g); };
    auto P0 = GeneratorKind::P(0), P1 = GeneratorKind::P(1), D = GeneratorKind::D(), M = GeneratorKind::M(0, 1);
    // D = i(k.d + 1) acting on the linear k0 gives i k0
    CHECK(coeffErr(sym::decompose(commutator(op(D), op(P0)), 1.5), 0, I) < 1e-14);
    CHECK(coeffErr(sym::decompose(commutator(op(D), op(P1)), 1.5), 1, I) < 1e-14);
    // M01 = -i(k+ d+ - k- d-) maps k0 -> i k1 and k1 -> i k0
    CHECK(coeffErr(sym::decompose(commutator(op(M), op(P0)), 1.5), 1, I) < 1e-14);
    CHECK(coeffErr(sym::decompose(commutator(op(M), op(P1)), 1.5), 0, I) < 1e-14);
    CHECK(commutator(op(P0), op(P1)).maxAbs() < 1e-15);
    CHECK(commutator(op(D), op(M)).maxAbs() < 1e-15);
    // Jacobi identity for a triple involving K
    auto a = op(GeneratorKind::K(0, 1.5)), b = op(P1), c = op(D);
    auto j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
    CHECK(j.maxAbs() < 1e-13);
    CHECK_THROWS(GeneratorKind::P(2).validate(2));
}

TEST_CASE("grid inner product reproduces the smeared two-point function") {
    auto grid = LightconeGrid::make(320, 20);
    for (double nu : {0.0, 0.5}) {
        auto h = WeightFunction::power(nu);
        auto f = TestFunction::gaussian(MinkVector{0, 0}, 2.0, MinkVector{8, 0});
        auto g = TestFunction::gaussian(MinkVector{0.3, -0.2}, 2.0, MinkVector{7, 1});
        auto a = ModeFunction::fromPacket(grid, h, f), b = ModeFunction::fromPacket(grid, h, g);
        cplx ip = innerProduct(a, b), sm = smeared2pt(h, f, h, g, 2).value;
        CHECK(std::abs(ip - sm) < 1e-7 * std::abs(sm));
        // sesquilinear
        CHECK(std::abs(innerProduct(a * I, b) + I * ip) < 1e-14 * std::abs(ip));
        CHECK(std::abs(innerProduct(a, b * I) - I * ip) < 1e-14 * std::abs(ip));
    }
}

TEST_CASE("generators are symmetric on the grid") {
    // the imaginary part of <psi, G psi> is stencil error and falls like h^4
    auto h = WeightFunction::power(0.5);
    auto f = TestFunction::gaussian(MinkVector{0.2, 0}, 2.0, MinkVector{8, 1});
    auto g1 = LightconeGrid::make(480, 20), g2 = LightconeGrid::make(960, 20);
    auto a = ModeFunction::fromPacket(g1, h, f), b = ModeFunction::fromPacket(g2, h, f);
    double nrm = innerProduct(a, a).real();
    for (auto g : {GeneratorKind::P(0), GeneratorKind::P(1), GeneratorKind::M(0, 1), GeneratorKind::D()}) {
        double e1 = std::abs(innerProduct(a, applyGenerator(g, a)).imag());
        double e2 = std::abs(innerProduct(b, applyGenerator(g, b)).imag());
        CHECK(e1 < 1e-5 * nrm);
        if (e1 > 1e-12 * nrm) CHECK(e2 < e1 / 8);
    }
    CHECK(innerProduct(a, applyGenerator(GeneratorKind::P(0), a)).real() > 0);
}

TEST_CASE("a selection of closures at a moderate grid") {
    auto grid = LightconeGrid::make(640, 20);
    const double Delta = 1.5;
    auto psi = ModeFunction::fromPacket(grid, WeightFunction::power(Delta - 1),
                                        TestFunction::gaussian(MinkVector{0, 0}, 2.0, MinkVector{8, 0}));
    auto r1 = algebraClosureCheck(GeneratorKind::D(), GeneratorKind::K(0, Delta), psi, 1e-4);
    CHECK(r1.pass);
    // [D, K0] is proportional to K0 only
    CHECK(std::abs(r1.expected.coeffs[4]) > 0.5);
    auto r2 = algebraClosureCheck(GeneratorKind::P(0), GeneratorKind::K(1, Delta), psi, 1e-4);
    CHECK(r2.pass);
    CHECK(std::abs(r2.expected.coeffs[2]) > 0.5);
    auto r3 = algebraClosureCheck(GeneratorKind::K(0, Delta), GeneratorKind::K(1, Delta), psi, 1e-4);
    CHECK(r3.pass);
}

TEST_CASE("n-point functions from the pairing recursion") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    const int n = 8;
    std::vector<std::vector<cplx>> R(n, std::vector<cplx>(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) R[i][j] = cplx(U(rng), U(rng));
    auto pair = [&](int i, int j) { return R[i][j]; };
    // brute force over permutations, keeping each matching once
    auto brute = [&](int m) {
        std::vector<int> p(m);
        std::iota(p.begin(), p.end(), 0);
        cplx s = 0;
        do {
            bool ok = true;
            for (int k = 0; k < m; k += 2) ok = ok && p[k] < p[k + 1] && (k == 0 || p[k - 2] < p[k]);
            if (!ok) continue;
            cplx prod = 1;
            for (int k = 0; k < m; k += 2) prod *= R[p[k]][p[k + 1]];
            s += prod;
        } while (std::next_permutation(p.begin(), p.end()));
        return s;
    };
    for (int m : {2, 4, 6, 8}) {
        cplx b = brute(m);
        CHECK(std::abs(npoint(m, pair) - b) < 1e-13 * std::max(1.0, std::abs(b)));
    }
    CHECK(npoint(3, pair) == cplx(0.0));
    CHECK(npoint(7, pair) == cplx(0.0));
    // all pairs equal to 1 count the matchings, (n-1)!!
    CHECK(npoint(8, [](int, int) { return cplx(1.0); }).real() == doctest::Approx(105.0));

    auto h = WeightFunction::one();
    std::vector<WeightFunction> hs(4, h);
    std::vector<TestFunction> fs = {TestFunction::gaussian(MinkVector{0, 0}, 1.5, MinkVector{3, 1}),
                                    TestFunction::gaussian(MinkVector{0.5, 0.2}, 1.2, MinkVector{2, -1}),
                                    TestFunction::gaussian(MinkVector{-0.3, 0.4}, 1.0, MinkVector{2.5, 0.5}),
                                    TestFunction::gaussian(MinkVector{0.2, -0.6}, 1.4, MinkVector{4, 1.5})};
    auto P = [&](int i, int j) { return smeared2pt(hs[i], fs[i], hs[j], fs[j], 2).value; };
    cplx w4 = npoint(hs, fs, 2);
    cplx e4 = P(0, 1) * P(2, 3) + P(0, 2) * P(1, 3) + P(0, 3) * P(1, 2);
    CHECK(std::abs(w4 - e4) < 1e-12 * std::abs(e4));
}
