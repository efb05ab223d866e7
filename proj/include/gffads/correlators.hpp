#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gffads/packet.hpp"
#include "gffads/quadrature.hpp"
#include "gffads/spacetime.hpp"

namespace gffads {

struct Correlator {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
};

// Spectral multiplier h(m^2) of a weighted field. Every kind may carry a
// rescaling h(m^2) -> pre * h(s m^2), which is how h_lambda is represented.
class WeightFunction {
public:
    enum class Kind { One, Polynomial, Power, BesselZ, Tabulated, Custom };

    static WeightFunction one();
    // sum_n c_n (m^2)^n
    static WeightFunction polynomial(std::vector<double> coeffs);
    // (m^2)^{nu/2}
    static WeightFunction power(double nu);
    // (1/sqrt 2) z^{d/2} J_nu(z m)
    static WeightFunction besselZ(double z, double nu, int d);
    // linear interpolation on increasing m^2 nodes, zero outside the table
    static WeightFunction tabulated(std::vector<double> m2, std::vector<double> h);
    // two whitespace-separated columns (m^2, h), '#' starts a comment
    static WeightFunction tabulatedFromFile(const std::string& path);
    // arbitrary smooth real function; [lo, hi] is its effective support in m^2
    static WeightFunction custom(std::function<double(double)> fn, std::string label,
                                 double lo = 0.0,
                                 double hi = std::numeric_limits<double>::infinity());

    double operator()(double m2) const;

    Kind kind() const { return kind_; }
    std::string describe() const;

    // h_lambda(m^2) = lambda^{d/2} h(lambda^2 m^2)
    WeightFunction scaled(double lambda, int d) const;

    // support in m^2 after rescaling; [0, inf) unless tabulated or custom
    std::pair<double, double> support() const;
    // points in m^2 where h is not smooth (tabulated nodes)
    std::vector<double> breakpoints() const;
    bool isZero() const;

    // parameters of the defining variant
    double nu() const { return nu_; }
    double depth() const { return z_; }
    int dim() const { return d_; }
    double prefactor() const { return pre_; }
    double argumentScale() const { return scale_; }
    // log-log slope of |h| fitted on the upper part of a table
    double growthExponent() const { return growth_; }

private:
    double base(double m2) const;

    Kind kind_ = Kind::One;
    std::vector<double> coeffs_;
    double nu_ = 0.0, z_ = 1.0;
    int d_ = 2;
    std::shared_ptr<const std::vector<double>> xs_, ys_;
    std::function<double(double)> fn_;
    std::string label_;
    double lo_ = 0.0, hi_ = std::numeric_limits<double>::infinity();
    double pre_ = 1.0, scale_ = 1.0;
    double growth_ = 0.0;
};

// Kallen-Lehmann measure d rho(m^2) = density(m^2) dm^2 on [lo, hi] plus point masses.
struct MassWeight {
    std::function<double(double)> density;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> point_masses; // (m^2, weight)
    // density behaves like (m^2 - lo)^{-1/2} at the lower end
    bool sqrt_threshold = false;
    std::string label;

    static MassWeight lebesgue();
    static MassWeight power(double nu);             // m^{2 nu} dm^2
    static MassWeight threshold(double M2);         // dm^2 / sqrt(m^2 - M^2)
    static MassWeight fromWeight(const WeightFunction& h); // h^2 dm^2

    void validate() const;
};

// W_m(x) with x^0 -> x^0 - i eps, closed form in K_{(d-2)/2} of
// sigma = |x_vec|^2 - (x^0 - i eps)^2 on the principal branch.
Correlator wightmanKG(double m, const MinkVector& x, int d, double eps);

// W_m(x) - W_m(-x) at eps -> 0:
//   -i pi (2 pi)^{-d/2} (m/tau)^{(d-2)/2} J_{(2-d)/2}(m tau) sgn x^0   (timelike)
// and 0 at spacelike x. Throws LightConeProximity on the cone.
Correlator commutatorKG(double m, const MinkVector& x, int d);

struct MassIntegralOptions {
    double rel_tol = 1e-10;
    double abs_floor = 1e-14;
};

// int_0^cutoff dm^2 h1 h2 W_m(x). cutoff <= 0 picks m_max = 40 / Re sqrt(sigma).
// The neglected tail enters error_estimate.
Correlator gff2pt(const WeightFunction& h1, const WeightFunction& h2, const MinkVector& x, int d,
                  double eps, double cutoff = 0.0, const MassIntegralOptions& opt = {});

// int d rho(m^2) W_m(x), integrated in m^2 (independent path for the
// Kallen-Lehmann consistency check).
Correlator kallenLehmann2pt(const MassWeight& rho, const MinkVector& x, int d, double eps,
                            double cutoff = 0.0, const MassIntegralOptions& opt = {});

struct CommutatorOptions {
    // finite m^2 cutoff; when empty the m-integral is Abel regularized
    std::optional<double> cutoff;
    AbelSchedule schedule = AbelSchedule::fine();
    OscillatoryOptions oscillatory{};
    double rel_tol = 1e-10;
};

// int dm^2 h1 h2 Delta_m(x). Exactly 0 at spacelike x.
Correlator gffCommutator(const WeightFunction& h1, const WeightFunction& h2, const MinkVector& x,
                         int d, const CommutatorOptions& opt = {});

struct SmearingGrid {
    int panels = 12;
    int order = 20;
    double cut = 8.5; // Gaussian half-width in units of 1/sigma
};

// (2 pi)^{-(d-1)} int_{V+} d^dk h1(k^2) h2(k^2) conj(f1^(k)) f2^(k), with
// f^(k) = int f(x) e^{i k.x} d^dx. Lightcone coordinates, d = 2 only.
Correlator smeared2pt(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                      const TestFunction& f2, int d, const SmearingGrid& grid = {});

// Symmetric weight h(m1^2, m2^2) of a generalized Wick square.
struct PairWeight {
    std::function<double(double, double)> h;
    std::pair<double, double> support{0.0, std::numeric_limits<double>::infinity()};
    // h = delta(m1^2 - m2^2): not square integrable
    bool diagonal_delta = false;

    static PairWeight product(const WeightFunction& a, const WeightFunction& b);
    static PairWeight zero();
};

// 2 int int dm1^2 dm2^2 h^2 W_m1(x) W_m2(x). Throws DivergenceError for the
// delta weight (see vacuumFluctuationDivergence for the diagnostic).
Correlator wick2pt(const PairWeight& h, const MinkVector& x, int d, double eps, double cutoff = 0.0,
                   const MassIntegralOptions& opt = {});

struct ScalingReport {
    cplx scaled_side;  // gff2pt(h_lambda, h_lambda, lambda x)
    cplx original;     // gff2pt(h, h, x)
    cplx direct;       // gff2pt(h, h, lambda x)
    std::optional<cplx> power_prediction; // lambda^{-2 Delta} gff2pt(h,h,x) for Power weights
    double discrepancy = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Dilation covariance gff2pt(h_lambda, h_lambda, lambda x) = gff2pt(h, h, x),
// with eps scaled along with x.
ScalingReport scalingCovarianceCheck(const WeightFunction& h, double lambda, const MinkVector& x,
                                     int d, double eps);

// J_nu for any real order (reflection through Y_nu below -1).
double besselJAnyOrder(double nu, double u);

} // namespace gffads
