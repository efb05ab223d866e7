#include "gffads/opalgebra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gffads {

GeneratorKind GeneratorKind::P(int mu) { return {GenType::P, mu, 0, 1.0}; }
GeneratorKind GeneratorKind::M(int mu, int nu) { return {GenType::M, mu, nu, 1.0}; }
GeneratorKind GeneratorKind::D() { return {GenType::D, 0, 0, 1.0}; }
GeneratorKind GeneratorKind::K(int mu, double Delta) { return {GenType::K, mu, 0, Delta}; }

void GeneratorKind::validate(int d) const {
    if (d != 2)
        throw std::invalid_argument("generators are implemented on the d = 2 lightcone grid");
    auto bad = [d](int i) { return i < 0 || i >= d; };
    switch (type) {
    case GenType::P:
        if (bad(mu)) throw std::invalid_argument("P: index out of range");
        break;
    case GenType::M:
        if (bad(mu) || bad(nu)) throw std::invalid_argument("M: index out of range");
        break;
    case GenType::D: break;
    case GenType::K:
        if (bad(mu)) throw std::invalid_argument("K: index out of range");
        if (!(Delta - 0.5 * d > -1.0)) throw std::invalid_argument("K: needs nu = Delta - d/2 > -1");
        break;
    }
}

std::string GeneratorKind::name() const {
    std::ostringstream os;
    switch (type) {
    case GenType::P: os << "P" << mu; break;
    case GenType::M: os << "M" << mu << nu; break;
    case GenType::D: os << "D"; break;
    case GenType::K: os << "K" << mu; break;
    }
    return os.str();
}

namespace sym {

namespace {
// x (x-1) ... (x-n+1)
double falling(int x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= double(x - i);
    return r;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}
} // namespace

DiffOp DiffOp::monomial(cplx c, int a, int b, int p, int q) {
    if (p < 0 || q < 0)
        throw std::invalid_argument("DiffOp: negative derivative order");
    DiffOp o;
    o.add({a, b, p, q}, c);
    return o;
}

void DiffOp::add(const Key& k, cplx c) {
    if (c == cplx(0.0))
        return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second == cplx(0.0))
        terms_.erase(it);
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    DiffOp r = *this;
    for (auto& [k, c] : o.terms_) r.add(k, c);
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const { return *this + o * cplx(-1.0); }

DiffOp DiffOp::operator*(cplx s) const {
    DiffOp r;
    for (auto& [k, c] : terms_) r.add(k, c * s);
    return r;
}

DiffOp DiffOp::compose(const DiffOp& o) const {
    // k^a d^p (k^a' g) = sum_i C(p,i) (d^i k^a') k^a d^(p-i) g  per variable
    DiffOp r;
    for (auto& [k1, c1] : terms_) {
        auto [a, b, p, q] = k1;
        for (auto& [k2, c2] : o.terms_) {
            auto [a2, b2, p2, q2] = k2;
            for (int i = 0; i <= p; ++i) {
                const double fi = binom(p, i) * falling(a2, i);
                if (fi == 0.0)
                    continue;
                for (int j = 0; j <= q; ++j) {
                    const double fj = binom(q, j) * falling(b2, j);
                    if (fj == 0.0)
                        continue;
                    r.add({a + a2 - i, b + b2 - j, p - i + p2, q - j + q2}, c1 * c2 * fi * fj);
                }
            }
        }
    }
    return r;
}

double DiffOp::maxAbs() const {
    double m = 0.0;
    for (auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

std::string DiffOp::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : terms_) {
        auto [a, b, p, q] = k;
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::fabs(c.imag()) << "i)";
        if (a) os << " k+^" << a;
        if (b) os << " k-^" << b;
        if (p) os << " d+^" << p;
        if (q) os << " d-^" << q;
    }
    return os.str();
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a.compose(b) - b.compose(a); }

DiffOp generatorOperator(const GeneratorKind& g) {
    g.validate(2);
    const cplx I(0.0, 1.0);
    using D = DiffOp;
    switch (g.type) {
    case GenType::P:
        // k_0 = (k+ + k-)/2, k_1 = -(k+ - k-)/2
        if (g.mu == 0)
            return D::monomial(0.5, 1, 0, 0, 0) + D::monomial(0.5, 0, 1, 0, 0);
        return D::monomial(-0.5, 1, 0, 0, 0) + D::monomial(0.5, 0, 1, 0, 0);
    case GenType::M: {
        if (g.mu == g.nu)
            return D{};
        // i (k_nu d/dk^mu - k_mu d/dk^nu); M01 = -i (k+ d+ - k- d-)
        const D m01 = D::monomial(-I, 1, 0, 1, 0) + D::monomial(I, 0, 1, 0, 1);
        return g.mu == 0 ? m01 : m01 * cplx(-1.0);
    }
    case GenType::D:
        // i (k.d + 1)
        return D::monomial(I, 1, 0, 1, 0) + D::monomial(I, 0, 1, 0, 1) + D::monomial(I, 0, 0, 0, 0);
    case GenType::K: {
        const double nu = g.Delta - 1.0;
        const double s = g.mu == 0 ? 1.0 : -1.0; // sign of the k- part
        // -2 d+ k+ d+  -/+ 2 d- k- d-  +  (nu^2/2)(1/k+ +/- 1/k-)
        return D::monomial(-2.0, 1, 0, 2, 0) + D::monomial(-2.0, 0, 0, 1, 0) +
               D::monomial(-2.0 * s, 0, 1, 0, 2) + D::monomial(-2.0 * s, 0, 0, 0, 1) +
               D::monomial(0.5 * nu * nu, -1, 0, 0, 0) + D::monomial(0.5 * nu * nu * s, 0, -1, 0, 0);
    }
    }
    return {};
}

GeneratorKind basisGenerator(int i, double Delta) {
    switch (i) {
    case 0: return GeneratorKind::P(0);
    case 1: return GeneratorKind::P(1);
    case 2: return GeneratorKind::M(0, 1);
    case 3: return GeneratorKind::D();
    case 4: return GeneratorKind::K(0, Delta);
    case 5: return GeneratorKind::K(1, Delta);
    default: throw std::invalid_argument("basisGenerator: index 6 is the identity");
    }
}

Decomposition decompose(const DiffOp& op, double Delta) {
    std::array<DiffOp, 7> basis;
    for (int i = 0; i < 6; ++i) basis[i] = generatorOperator(basisGenerator(i, Delta));
    basis[6] = DiffOp::identity();
    std::set<DiffOp::Key> keys;
    for (auto& b : basis)
        for (auto& [k, c] : b.terms()) keys.insert(k);
    for (auto& [k, c] : op.terms()) keys.insert(k);
    const int rows = static_cast<int>(keys.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, 7);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(rows);
    int r = 0;
    for (auto& k : keys) {
        for (int i = 0; i < 7; ++i) {
            auto it = basis[i].terms().find(k);
            if (it != basis[i].terms().end())
                A(r, i) = it->second;
        }
        auto it = op.terms().find(k);
        if (it != op.terms().end())
            y(r) = it->second;
        ++r;
    }
    Eigen::VectorXcd c = A.colPivHouseholderQr().solve(y);
    Decomposition out;
    for (int i = 0; i < 7; ++i) {
        // clean roundoff so exact zeros stay zero
        cplx v = c(i);
        if (std::fabs(v.real()) < 1e-13) v.real(0.0);
        if (std::fabs(v.imag()) < 1e-13) v.imag(0.0);
        out.coeffs[i] = v;
        c(i) = v;
    }
    out.residual = (A * c - y).cwiseAbs().maxCoeff();
    return out;
}

} // namespace sym
} // namespace gffads
