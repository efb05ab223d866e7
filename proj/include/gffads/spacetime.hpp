#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace gffads {

// Point or vector of d-dimensional Minkowski space, signature (+,-,...,-).
class MinkVector {
public:
    MinkVector() = default;
    MinkVector(std::initializer_list<double> c);
    explicit MinkVector(std::vector<double> c);
    static MinkVector zero(int d);

    int dim() const { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[i]; }
    double& operator[](int i) { return c_[i]; }
    const std::vector<double>& components() const { return c_; }

    // index lowered with eta
    double lower(int mu) const { return mu == 0 ? c_[0] : -c_[mu]; }
    double euclideanNorm2() const;

    MinkVector operator+(const MinkVector& o) const;
    MinkVector operator-(const MinkVector& o) const;
    MinkVector operator-() const;
    MinkVector operator*(double s) const;

private:
    std::vector<double> c_;
};

MinkVector operator*(double s, const MinkVector& v);

// eta(a, b); throws std::invalid_argument on dimension mismatch
double dot(const MinkVector& a, const MinkVector& b);

// eta(a - b, a - b)
double interval(const MinkVector& a, const MinkVector& b);

enum class CausalClass { spacelike, lightlike, timelike_future, timelike_past };

std::string toString(CausalClass c);

// Sign of the interval decides; |interval| <= rel_tol * |a-b|_E^2 counts as lightlike.
CausalClass classify(const MinkVector& a, const MinkVector& b, double rel_tol = 1e-12);

// Boost with rapidity eta in the (0, axis) plane.
MinkVector boost(const MinkVector& x, int axis, double rapidity);

// Rotation by angle in the (i, j) spatial plane.
MinkVector rotate(const MinkVector& x, int i, int j, double angle);

// Poincare chart of AdS_{d+1}: depth z > 0 and boundary point x.
struct AdSPoint {
    double z = 1.0;
    MinkVector x;
};

void validate(const AdSPoint& p);

// Embedding space R^{2,d}. Component layout: [Y_{-1}, x^0, ..., x^{d-1}, Y_d]
// with metric (+, +, -, ..., -, -). e_+ = (E_{-1} + E_d)/2 and
// e_- = (E_{-1} - E_d)/2 are null with e_+ . e_- = 1/2.
using EmbeddingVector = std::vector<double>;

double embeddingDot(const EmbeddingVector& a, const EmbeddingVector& b);

// xi = (x^mu e_mu + e_- + (z^2 - x.x) e_+) / z, satisfying xi.xi = 1.
EmbeddingVector embed(const AdSPoint& p);

// coefficients of e_+ and e_- in an embedding vector
double ePlusComponent(const EmbeddingVector& v);
double eMinusComponent(const EmbeddingVector& v);

// (-(x-x')^2 + (z-z')^2) / (2 z z'); equals embed(p).embed(q) - 1.
double chordalDistance(const AdSPoint& p, const AdSPoint& q);

// (z, x - b (x^2 - z^2)) / (1 - 2 b.x + b^2 (x^2 - z^2)); throws ChartExit
// when the denominator vanishes (|N| < 1e-12) or the image leaves z > 0.
AdSPoint adsSpecialConformal(const AdSPoint& p, const MinkVector& b);

// boundary special conformal map (x - b x^2) / (1 - 2 b.x + b^2 x^2)
MinkVector boundarySpecialConformal(const MinkVector& x, const MinkVector& b);

AdSPoint adsDilate(const AdSPoint& p, double lambda);

} // namespace gffads
