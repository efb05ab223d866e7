#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gffads/correlators.hpp"
#include "gffads/fock.hpp"
#include "gffads/packet.hpp"

namespace gffads {

// Which of the three placements of the tensor between the two one-particle
// vectors Phi_i = phi_{h_i}(f_i) Omega:
//   ThetaFirst  <Omega, Theta(f) Phi_1 Phi_2>    (kernel signs --)
//   Middle      <Omega, phi(f1) Theta(f) Phi_2>  (+-)
//   ThetaLast   <Omega, phi(f1) phi(f2) Theta(f) Omega>  (++)
enum class Ordering { ThetaFirst, Middle, ThetaLast };

std::string toString(Ordering o);

// Coefficient of the bilinear with phase exp(i(e1 k1 + e2 k2).x), lower indices:
//   2 [ -e1 e2 (k1_mu k2_nu + k1_nu k2_mu)/2 + eta_mu_nu (e1 e2 k1.k2 + (k1^2 + k2^2)/2)/2 ]
// plus improvement * 2 (eta_mu_nu q^2 - q_mu q_nu), q = e1 k1 + e2 k2.
// Throws std::invalid_argument unless k1, k2 lie in the open forward cone (d = 2).
double setKernel(const MinkVector& k1, const MinkVector& k2, int e1, int e2, int mu, int nu,
                 double improvement = 0.0);

struct SETOptions {
    int k1_panels = 6;
    int k2_panels = 6;
    int order = 16;
    double cut = 8.5;          // Gaussian windows in units of 1/sigma
    double improvement = 0.0;  // multiple of (d_mu d_nu - eta box) :phi^2:
    bool error_estimate = true;
};

// Matrix element of Theta_mu_nu(f) with delta(k1^2 - k2^2) resolved through
// k2- = k1+ k1- / k2+; a 3D tensor Gauss-Legendre rule in (k1+, k1-, k2+).
// The windows depend only on the Gaussian parameters of f, f1, f2.
Correlator setMatrixElement(const TestFunction& f, const WeightFunction& h1, const TestFunction& f1,
                            const WeightFunction& h2, const TestFunction& f2, int mu, int nu, int d,
                            Ordering ord = Ordering::Middle, const SETOptions& opt = {});

struct MonteCarloOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 10'000'000;
    int shards = 64;
    double widen = 1.1;   // proposal width relative to the fitted integrand moments
    int threads = 0;      // 0: hardware concurrency
};

// Independent importance-sampling estimate of the same integral (middle ordering).
// Deterministic for a given seed and shard count, whatever the thread count.
Correlator setMatrixElementMC(const TestFunction& f, const WeightFunction& h1, const TestFunction& f1,
                              const WeightFunction& h2, const TestFunction& f2, int mu, int nu,
                              const MonteCarloOptions& opt = {});

struct ConservationReport {
    cplx contraction;           // sum_mu ME_mu_nu(d^mu f)
    double scale = 0.0;         // max_mu |ME_mu_nu(d^mu f)|
    double relative = 0.0;
    bool pass = false;
    double tolerance = 1e-8;
};

ConservationReport conservationCheck(const TestFunction& f, const WeightFunction& h1, const TestFunction& f1,
                                     const WeightFunction& h2, const TestFunction& f2, int nu, int d,
                                     Ordering ord = Ordering::Middle, const SETOptions& opt = {});

struct DensityRow {
    double s = 0.0;
    cplx value;
    double deviation = 0.0;
};

struct DensityReport {
    cplx limit;                 // one-particle matrix element of the generator
    std::vector<DensityRow> rows;
    bool monotone = false;
    double tolerance = 0.0;
    bool pass = false;
};

// time profile (2 pi tau^2)^{-1/2} exp(-x0^2 / 2 tau^2) times exp(-x1^2 / 2 s^2)
TestFunction densitySmearing(double tau, double s);

// Theta_{0 nu} smeared with densitySmearing(tau, s) against <phi(f1) P_nu phi(f2)>.
DensityReport momentumDensityCheck(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                                   const TestFunction& f2, int nu, const std::vector<double>& broadening,
                                   double tau = 1.0, double tolerance = 1e-2, const SETOptions& opt = {});

// x_mu Theta_{0 nu} - x_nu Theta_{0 mu} against the generator M_mu_nu (d = 2: (0,1)).
DensityReport lorentzDensityCheck(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                                  const TestFunction& f2, int mu, int nu, const std::vector<double>& broadening,
                                  double tau = 1.0, double tolerance = 2e-2, const SETOptions& opt = {});

// <phi(f1) X phi(f2)> for a generator X evaluated on a fock grid
cplx oneParticleElement(const GeneratorKind& G, const WeightFunction& h1, const TestFunction& f1,
                        const WeightFunction& h2, const TestFunction& f2, int grid_nodes = 480);

struct TraceReport {
    cplx trace;      // ME_00 - ME_11
    cplx me00, me11;
    double error_estimate = 0.0;
    bool nonzero = false;
};

TraceReport traceCheck(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                       const TestFunction& f2, const TestFunction& f, const SETOptions& opt = {});

struct LocalityReport {
    cplx middle;   // <phi(f1) Theta(f) phi_h(g)>
    cplx last;     // <phi(f1) phi_h(g) Theta(f)>
    double relative = 0.0;
    bool pass = false;
    double tolerance = 1e-6;
};

// <phi(f1) [Theta_mu_nu(f), phi_h(g)] Omega> to be compared with 0 when f and g
// are spacelike separated; relative to the larger of the two orderings.
LocalityReport commutatorLocalityCheck(const TestFunction& f, const WeightFunction& h1, const TestFunction& f1,
                                       const WeightFunction& h, const TestFunction& g, int mu, int nu,
                                       double tolerance = 1e-6, const SETOptions& opt = {});

struct FluctuationReport {
    std::vector<double> sigmas;
    std::vector<double> values;        // delta-mollified weight of width sigma
    std::vector<double> fixed_values;  // fixed smooth weight, evaluated on each sigma's grid
    bool increasing = false;
    double exponent = 0.0;             // fitted V ~ sigma^-exponent
    double fixed_spread = 0.0;         // max relative deviation among fixed_values
};

struct FluctuationOptions {
    int k_nodes = 24;       // per k1 lightcone axis (Gauss-Legendre, graded at 0)
    int y_nodes = 24;       // rapidity of k2
    int t_order = 16;       // nodes per t panel (four panels)
    double fixed_width = 0.5;
};

// ||Theta_00(f) Omega||^2 with the delta weight replaced by a normalized Gaussian
// of width sigma in t = m2^2 - m1^2 (the generalized Wick square fluctuation).
FluctuationReport vacuumFluctuationDivergence(const std::vector<double>& sigmas, const TestFunction& f,
                                              const FluctuationOptions& opt = {});
// default: 0.2 * 2^-k, k = 0..5
std::vector<double> defaultSigmaSequence();

// (1/2) int_0^Z z J_nu(z m1) J_nu(z m2) dz by adaptive quadrature
double zIntegralWeight(double nu, double Z, double m1sq, double m2sq);
// the same through the Lommel closed form (adaptive near the diagonal)
double zIntegralWeightLommel(double nu, double Z, double m1sq, double m2sq);

struct DeltaConvergence {
    double smeared = 0.0;  // int dm2^2 W_Z(m1^2, m2^2) g(m2^2)
    double target = 0.0;   // g(m1^2)
    double rel_error = 0.0;
};

// g(m^2) = exp(-(m^2 - center)^2 / (2 width^2))
DeltaConvergence zIntegralDeltaCheck(double nu, double Z, double m1sq, double center, double width);

struct ReductionRow {
    double Z = 0.0;
    cplx value;
    double deviation = 0.0;       // relative to the delta-weight element
    double conservation = 0.0;    // |sum_mu ME_mu_nu(d^mu f)| / scale at this Z
};

struct ReductionReport {
    cplx delta_value;
    std::vector<ReductionRow> rows;
    bool monotone = false;
    double tolerance = 1e-2;
    bool pass = false;
};

struct ReductionOptions {
    int k1_panels = 5;
    int k2_panels = 4;
    int order = 12;
    int t_order = 12;
    double cut = 8.5;
    bool conservation = true;
};

// Matrix element with zIntegralWeight(nu, Z; k1^2, k2^2) in place of the delta
// weight, middle ordering, compared along Z_sequence with setMatrixElement.
ReductionReport adsSETReduction(double nu, const std::vector<double>& Z_sequence, const TestFunction& f,
                                const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                                const TestFunction& f2, int mu, int nu_index, const ReductionOptions& opt = {});

} // namespace gffads
