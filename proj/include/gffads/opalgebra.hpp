#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <tuple>

namespace gffads {

using cplx = std::complex<double>;

enum class GenType { P, M, D, K };

// One generator of the conformal algebra acting on one-particle
// wavefunctions over the forward cone (d = 2).
struct GeneratorKind {
    GenType type = GenType::P;
    int mu = 0;
    int nu = 0;
    double Delta = 1.0; // scaling dimension, only used by K

    static GeneratorKind P(int mu);
    static GeneratorKind M(int mu, int nu);
    static GeneratorKind D();
    static GeneratorKind K(int mu, double Delta);

    void validate(int d = 2) const;
    std::string name() const;
};

namespace sym {

// Sum of monomials c k+^a k-^b d+^p d-^q (a, b may be negative), with
// derivatives standing to the right.
class DiffOp {
public:
    using Key = std::tuple<int, int, int, int>;

    static DiffOp monomial(cplx c, int a, int b, int p, int q);
    static DiffOp identity() { return monomial(1.0, 0, 0, 0, 0); }

    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp operator*(cplx s) const;
    // composition: (A * B) f = A(B f)
    DiffOp compose(const DiffOp& o) const;

    const std::map<Key, cplx>& terms() const { return terms_; }
    double maxAbs() const;
    std::string str() const;

private:
    void add(const Key& k, cplx c);
    std::map<Key, cplx> terms_;
};

DiffOp commutator(const DiffOp& a, const DiffOp& b);

// The defining differential operator of a generator in lightcone momenta.
DiffOp generatorOperator(const GeneratorKind& g);

// Coefficients on {P0, P1, M01, D, K0, K1, 1}; the K basis elements use the
// given Delta. residual is the max-norm of what the basis cannot represent.
struct Decomposition {
    std::array<cplx, 7> coeffs{};
    double residual = 0.0;
};

Decomposition decompose(const DiffOp& op, double Delta);

// the basis element behind coeffs[i] of a Decomposition
GeneratorKind basisGenerator(int i, double Delta);

} // namespace sym
} // namespace gffads
