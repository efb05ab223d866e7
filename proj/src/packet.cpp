#include "gffads/packet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace gffads {

namespace {
constexpr double pi = std::numbers::pi;
}

TestFunction::TestFunction(MinkVector center, std::vector<double> widths, MinkVector carrier,
                           std::vector<Monomial> poly)
    : center_(std::move(center)), widths_(std::move(widths)), carrier_(std::move(carrier)),
      poly_(std::move(poly)) {
    const int d = center_.dim();
    if (d < 2 || static_cast<int>(widths_.size()) != d || carrier_.dim() != d)
        throw std::invalid_argument("TestFunction: inconsistent dimensions");
    for (double s : widths_)
        if (!(s > 0.0))
            throw std::invalid_argument("TestFunction: widths must be positive");
    for (auto& m : poly_) {
        if (m.powers.empty())
            m.powers.assign(d, 0);
        if (static_cast<int>(m.powers.size()) != d)
            throw std::invalid_argument("TestFunction: monomial dimension mismatch");
    }
    simplify();
}

TestFunction TestFunction::gaussian(const MinkVector& center, double width, const MinkVector& carrier) {
    return gaussian(center, std::vector<double>(center.dim(), width), carrier);
}

TestFunction TestFunction::gaussian(const MinkVector& center, std::vector<double> widths,
                                    const MinkVector& carrier) {
    Monomial one;
    one.powers.assign(center.dim(), 0);
    return TestFunction(center, std::move(widths), carrier, {one});
}

void TestFunction::simplify() {
    std::map<std::vector<int>, cplx> acc;
    for (const auto& m : poly_) acc[m.powers] += m.coeff;
    poly_.clear();
    for (auto& [p, c] : acc)
        if (c != cplx(0.0)) poly_.push_back({c, p});
}

int TestFunction::degree() const {
    int deg = 0;
    for (const auto& m : poly_) {
        int s = 0;
        for (int p : m.powers) s += p;
        deg = std::max(deg, s);
    }
    return deg;
}

cplx TestFunction::operator()(const MinkVector& x) const {
    const int d = dim();
    double e = 0.0;
    for (int mu = 0; mu < d; ++mu) {
        const double t = (x[mu] - center_[mu]) / widths_[mu];
        e += t * t;
    }
    cplx p = 0.0;
    for (const auto& m : poly_) {
        cplx term = m.coeff;
        for (int mu = 0; mu < d; ++mu)
            for (int j = 0; j < m.powers[mu]; ++j) term *= x[mu];
        p += term;
    }
    return p * std::exp(-0.5 * e) * std::exp(cplx(0.0, -dot(carrier_, x)));
}

cplx TestFunction::fourierImpl(const MinkVector& k, double sign) const {
    const int d = dim();
    if (k.dim() != d)
        throw std::invalid_argument("TestFunction: momentum dimension mismatch");
    int maxdeg = 0;
    for (const auto& m : poly_)
        for (int p : m.powers) maxdeg = std::max(maxdeg, p);
    cplx base = 1.0;
    // moments[mu][n] = E[Y^n] for Y ~ N(c + i s^2 p, s^2)
    thread_local std::vector<std::vector<cplx>> moments;
    moments.resize(d);
    for (int mu = 0; mu < d; ++mu) {
        const double q = sign * k[mu] - carrier_[mu];
        const double p = mu == 0 ? q : -q; // lower index
        const double s = widths_[mu], c = center_[mu];
        base *= std::sqrt(2.0 * pi) * s * std::exp(cplx(-0.5 * s * s * p * p, p * c));
        auto& M = moments[mu];
        M.assign(maxdeg + 1, 0.0);
        const cplx mean(c, s * s * p);
        M[0] = 1.0;
        if (maxdeg >= 1) M[1] = mean;
        for (int n = 2; n <= maxdeg; ++n) M[n] = mean * M[n - 1] + double(n - 1) * s * s * M[n - 2];
    }
    cplx sum = 0.0;
    for (const auto& m : poly_) {
        cplx term = m.coeff;
        for (int mu = 0; mu < d; ++mu) term *= moments[mu][m.powers[mu]];
        sum += term;
    }
    return base * sum;
}

cplx TestFunction::fourierPlus(const MinkVector& k) const { return fourierImpl(k, 1.0); }

cplx TestFunction::fourierMinus(const MinkVector& k) const { return fourierImpl(k, -1.0); }

TestFunction TestFunction::derivative(int mu) const {
    const int d = dim();
    if (mu < 0 || mu >= d)
        throw std::invalid_argument("TestFunction::derivative: bad index");
    const double s2 = widths_[mu] * widths_[mu];
    const cplx shift = center_[mu] / s2 - cplx(0.0, carrier_.lower(mu));
    std::vector<Monomial> out;
    for (const auto& m : poly_) {
        if (m.powers[mu] > 0) {
            Monomial a = m;
            a.coeff *= double(m.powers[mu]);
            a.powers[mu] -= 1;
            out.push_back(a);
        }
        Monomial b = m;
        b.coeff *= -1.0 / s2;
        b.powers[mu] += 1;
        out.push_back(b);
        Monomial c = m;
        c.coeff *= shift;
        out.push_back(c);
    }
    return TestFunction(center_, widths_, carrier_, out);
}

TestFunction TestFunction::timesX(int mu) const {
    std::vector<Monomial> out = poly_;
    for (auto& m : out) m.powers[mu] += 1;
    return TestFunction(center_, widths_, carrier_, out);
}

TestFunction TestFunction::scaled(cplx s) const {
    std::vector<Monomial> out = poly_;
    for (auto& m : out) m.coeff *= s;
    return TestFunction(center_, widths_, carrier_, out);
}

TestFunction TestFunction::conjugate() const {
    std::vector<Monomial> out = poly_;
    for (auto& m : out) m.coeff = std::conj(m.coeff);
    return TestFunction(center_, widths_, -carrier_, out);
}

TestFunction TestFunction::translated(const MinkVector& a) const {
    // P(x - a) expanded binomially
    const int d = dim();
    std::vector<Monomial> out;
    for (const auto& m : poly_) {
        std::vector<Monomial> partial{{m.coeff, std::vector<int>(d, 0)}};
        for (int mu = 0; mu < d; ++mu) {
            std::vector<Monomial> next;
            const int n = m.powers[mu];
            double binom = 1.0;
            for (int j = 0; j <= n; ++j) {
                if (j > 0) binom = binom * (n - j + 1) / j;
                const double factor = binom * std::pow(-a[mu], n - j);
                for (auto t : partial) {
                    t.coeff *= factor;
                    t.powers[mu] += j;
                    next.push_back(t);
                }
            }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    // the carrier phase exp(-i k0.(x-a)) picks up exp(i k0.a)
    const cplx phase = std::exp(cplx(0.0, dot(carrier_, a)));
    for (auto& m : out) m.coeff *= phase;
    return TestFunction(center_ + a, widths_, carrier_, out);
}

namespace {
void sameGaussian(const TestFunction& a, const TestFunction& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("TestFunction: dimension mismatch");
    for (int mu = 0; mu < a.dim(); ++mu)
        if (a.center()[mu] != b.center()[mu] || a.widths()[mu] != b.widths()[mu] ||
            a.carrier()[mu] != b.carrier()[mu])
            throw std::invalid_argument("TestFunction: sum needs a common Gaussian and carrier");
}
} // namespace

TestFunction TestFunction::operator+(const TestFunction& o) const {
    sameGaussian(*this, o);
    std::vector<Monomial> out = poly_;
    out.insert(out.end(), o.poly_.begin(), o.poly_.end());
    return TestFunction(center_, widths_, carrier_, out);
}

TestFunction TestFunction::operator-(const TestFunction& o) const { return *this + o.scaled(-1.0); }

double TestFunction::momentumHalfWidth(int mu, double cut) const {
    return (cut + std::sqrt(double(degree()))) / widths_[mu];
}

void GaussianPacket::validate() const {
    if (!(width > 0.0))
        throw std::invalid_argument("GaussianPacket: width must be positive");
    if (center.dim() != carrier.dim() || center.dim() < 2)
        throw std::invalid_argument("GaussianPacket: inconsistent dimensions");
}

TestFunction GaussianPacket::toTestFunction() const {
    validate();
    return TestFunction::gaussian(center, width, carrier);
}

cplx GaussianPacket::fourier(const MinkVector& k) const {
    validate();
    const MinkVector q = k - carrier;
    const int d = k.dim();
    return std::exp(cplx(0.0, dot(q, center))) * std::pow(2.0 * pi * width * width, 0.5 * d) *
           std::exp(-0.5 * width * width * q.euclideanNorm2());
}

} // namespace gffads
