#include "gffads/spacetime.hpp"

#include <cmath>
#include <stdexcept>

#include "gffads/errors.hpp"

namespace gffads {

MinkVector::MinkVector(std::initializer_list<double> c) : c_(c) {}

MinkVector::MinkVector(std::vector<double> c) : c_(std::move(c)) {}

MinkVector MinkVector::zero(int d) { return MinkVector(std::vector<double>(d, 0.0)); }

double MinkVector::euclideanNorm2() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return s;
}

namespace {
void sameDim(const MinkVector& a, const MinkVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("Minkowski vectors of different dimension");
}
} // namespace

MinkVector MinkVector::operator+(const MinkVector& o) const {
    sameDim(*this, o);
    MinkVector r = *this;
    for (int i = 0; i < dim(); ++i) r.c_[i] += o.c_[i];
    return r;
}

MinkVector MinkVector::operator-(const MinkVector& o) const {
    sameDim(*this, o);
    MinkVector r = *this;
    for (int i = 0; i < dim(); ++i) r.c_[i] -= o.c_[i];
    return r;
}

MinkVector MinkVector::operator-() const {
    MinkVector r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

MinkVector MinkVector::operator*(double s) const {
    MinkVector r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
}

MinkVector operator*(double s, const MinkVector& v) { return v * s; }

double dot(const MinkVector& a, const MinkVector& b) {
    sameDim(a, b);
    if (a.dim() < 2)
        throw std::invalid_argument("Minkowski space needs d >= 2");
    double s = a[0] * b[0];
    for (int i = 1; i < a.dim(); ++i) s -= a[i] * b[i];
    return s;
}

double interval(const MinkVector& a, const MinkVector& b) {
    const MinkVector d = a - b;
    return dot(d, d);
}

std::string toString(CausalClass c) {
    switch (c) {
    case CausalClass::spacelike: return "spacelike";
    case CausalClass::lightlike: return "lightlike";
    case CausalClass::timelike_future: return "timelike_future";
    case CausalClass::timelike_past: return "timelike_past";
    }
    return "?";
}

CausalClass classify(const MinkVector& a, const MinkVector& b, double rel_tol) {
    const MinkVector d = a - b;
    const double s = dot(d, d);
    if (std::fabs(s) <= rel_tol * d.euclideanNorm2())
        return CausalClass::lightlike;
    if (s < 0.0)
        return CausalClass::spacelike;
    return d[0] > 0.0 ? CausalClass::timelike_future : CausalClass::timelike_past;
}

MinkVector boost(const MinkVector& x, int axis, double rapidity) {
    if (axis < 1 || axis >= x.dim())
        throw std::invalid_argument("boost: bad axis");
    MinkVector r = x;
    const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
    r[0] = ch * x[0] + sh * x[axis];
    r[axis] = sh * x[0] + ch * x[axis];
    return r;
}

MinkVector rotate(const MinkVector& x, int i, int j, double angle) {
    if (i < 1 || j < 1 || i >= x.dim() || j >= x.dim() || i == j)
        throw std::invalid_argument("rotate: bad plane");
    MinkVector r = x;
    const double c = std::cos(angle), s = std::sin(angle);
    r[i] = c * x[i] - s * x[j];
    r[j] = s * x[i] + c * x[j];
    return r;
}

void validate(const AdSPoint& p) {
    if (!(p.z > 0.0))
        throw std::invalid_argument("AdSPoint: z must be positive");
    if (p.x.dim() < 2)
        throw std::invalid_argument("AdSPoint: boundary dimension must be >= 2");
}

double embeddingDot(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.size() != b.size() || a.size() < 4)
        throw std::invalid_argument("embeddingDot: size mismatch");
    const std::size_t n = a.size();
    double s = a[0] * b[0] + a[1] * b[1];
    for (std::size_t i = 2; i < n; ++i) s -= a[i] * b[i];
    return s;
}

EmbeddingVector embed(const AdSPoint& p) {
    validate(p);
    const int d = p.x.dim();
    EmbeddingVector xi(d + 2, 0.0);
    const double cp = (p.z * p.z - dot(p.x, p.x)) / p.z; // e_+ coefficient
    const double cm = 1.0 / p.z;                          // e_- coefficient
    xi[0] = 0.5 * (cp + cm);
    xi[d + 1] = 0.5 * (cp - cm);
    for (int mu = 0; mu < d; ++mu) xi[mu + 1] = p.x[mu] / p.z;
    return xi;
}

double ePlusComponent(const EmbeddingVector& v) { return v.front() + v.back(); }

double eMinusComponent(const EmbeddingVector& v) { return v.front() - v.back(); }

double chordalDistance(const AdSPoint& p, const AdSPoint& q) {
    validate(p);
    validate(q);
    const double dz = p.z - q.z;
    return (-interval(p.x, q.x) + dz * dz) / (2.0 * p.z * q.z);
}

AdSPoint adsSpecialConformal(const AdSPoint& p, const MinkVector& b) {
    validate(p);
    const double s = dot(p.x, p.x) - p.z * p.z;
    const double N = 1.0 - 2.0 * dot(b, p.x) + dot(b, b) * s;
    if (std::fabs(N) < 1e-12)
        throw ChartExit("adsSpecialConformal: singular denominator");
    AdSPoint r{p.z / N, (p.x - b * s) * (1.0 / N)};
    if (!(r.z > 0.0))
        throw ChartExit("adsSpecialConformal: image leaves the Poincare chart");
    return r;
}

MinkVector boundarySpecialConformal(const MinkVector& x, const MinkVector& b) {
    const double xx = dot(x, x);
    const double N = 1.0 - 2.0 * dot(b, x) + dot(b, b) * xx;
    if (std::fabs(N) < 1e-12)
        throw ChartExit("boundarySpecialConformal: singular denominator");
    return (x - b * xx) * (1.0 / N);
}

AdSPoint adsDilate(const AdSPoint& p, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("adsDilate: lambda must be positive");
    return {lambda * p.z, p.x * lambda};
}

} // namespace gffads
