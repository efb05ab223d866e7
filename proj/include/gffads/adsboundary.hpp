#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gffads/correlators.hpp"
#include "gffads/fock.hpp"
#include "gffads/quadrature.hpp"
#include "gffads/spacetime.hpp"

namespace gffads {

// Bulk Klein-Gordon field of order nu on AdS_{d+1}.
struct AdSFieldSpec {
    double nu = 0.5;
    int d = 2;

    double Delta() const { return 0.5 * d + nu; }
    double M2() const { return Delta() * (Delta() - d); }
    void validate() const;
};

// 2^{-nu-1/2} / Gamma(nu+1)
double boundaryConstant(double nu);

// (1/2)(z z')^{d/2} int dm^2 J_nu(z m) J_nu(z' m) W_m(dx); the same path as
// gff2pt with two BesselZ weights.
Correlator ads2pt(const AdSFieldSpec& spec, double z, double zp, const MinkVector& dx, double eps,
                  double cutoff = 0.0);

enum class LiftPath { Bessel, JEven };

// multiplication of a wavefunction by h_z(k^2) = (1/sqrt 2) z^{d/2} J_nu(z sqrt(k^2))
ModeFunction holographicLift(const AdSFieldSpec& spec, double z, const ModeFunction& fhat,
                             LiftPath path = LiftPath::Bessel);

struct BoundaryLimitRow {
    double z = 0.0;
    double rescaled = 0.0;   // z^{-2 Delta} ads2pt(z, z, dx)
    double deviation = 0.0;  // relative to the boundary value
};

struct BoundaryLimitReport {
    double limit = 0.0;      // c_nu^2 gff2pt(Power, Power, dx)
    std::vector<BoundaryLimitRow> rows;
    bool monotone = false;
    double rate = 0.0;       // log-log slope of deviation against z
};

// default sequence is 0.2, 0.1, ..., 0.2 * 2^-6 in units of sqrt(-dx^2)
BoundaryLimitReport boundaryLimitCheck(const AdSFieldSpec& spec, const std::vector<double>& z_sequence,
                                       const MinkVector& dx);
std::vector<double> defaultBoundarySequence(const MinkVector& dx);

// profile in the AdS depth z
struct ZProfile {
    std::function<double(double)> g;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    std::string label;

    static ZProfile gaussian(double z0, double width);
    // exp(-1 / (1 - u^2)) on (a, b), u the rescaled coordinate
    static ZProfile bump(double a, double b);
    // g(lambda z)
    ZProfile scaled(double lambda) const;
    double integrationTop() const;
};

// Gaussian in the d-1 spatial coordinates at fixed time
struct SpatialPacket {
    std::vector<double> center;
    double width = 1.0;

    double operator()(const std::vector<double>& x) const;
    // int f(x) e^{-i k.x} d^{d-1}x
    cplx fourier(const std::vector<double>& k) const;
};

struct CCRReport {
    cplx value;       // <[phi(g f), pi(gp fp)]> from the mode representation
    cplx reference;   // i int g gp dz int f fp dx
    double discrepancy = 0.0;
    double error_estimate = 0.0;
};

// d = 2: spatial packets are one-dimensional
CCRReport ccrCheck(const AdSFieldSpec& spec, const ZProfile& g, const ZProfile& gp, const SpatialPacket& f,
                   const SpatialPacket& fp);

// int_0^inf u^{1-mu} J_mu(a u) J_nu(b u) J_nu(c u) du, Abel regularized.
QuadratureResult bonusLocality(double mu, double nu, double a, double b, double c,
                               const AbelSchedule& schedule = AbelSchedule::fine(),
                               const OscillatoryOptions& opt = {});

// Closed form at nu = 1/2, mu = 0.
double bonusLocalityHalfInteger(double a, double b, double c);

// Throws LightConeProximity inside |a^2 - (b -/+ c)^2| < 0.05 (b -/+ c)^2.
void checkGuardBand(double a, double b, double c, double band = 0.05);

// (1/2)(z z')^{d/2} int dm^2 J_nu(z m) J_nu(z' m) Delta_m(dx), Abel regularized in m.
// Timelike dx inside the guard band around (z -/+ z')^2 throws LightConeProximity.
Correlator adsCommutator(const AdSFieldSpec& spec, double z, double zp, const MinkVector& dx,
                         const CommutatorOptions& opt = {});

struct MassChangeReport {
    double value = 0.0;      // int z' dz' K(z, z') h'_{z'}(m^2), eps -> 0
    double reference = 0.0;  // h_z(m^2)
    double rel_error = 0.0;
    double error_estimate = 0.0;
    std::vector<double> epsilons, damped;
};

// Kernel identity K_{nu nu'} h' = h with the inner z' integral damped by
// exp(-eps z'), closed in eps by polynomial extrapolation.
MassChangeReport massChangeKernelCheck(double nu, double nup, double z, double m, int d,
                                       const AbelSchedule& schedule = AbelSchedule::geometric(0.2, 5, 4));

// int_0^inf z e^{-eps z} J_nu(a z) J_nu(b z) dz
double dampedBesselProduct(double nu, double a, double b, double eps);

} // namespace gffads
