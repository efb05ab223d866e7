#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "gffads/errors.hpp"

namespace gffads {

using cplx = std::complex<double>;
using RealFn = std::function<double(double)>;
using CplxFn = std::function<cplx(double)>;

struct QuadratureResult {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

// Damping parameters for I(eps) = int_0^inf f(u) exp(-eps u) du and the degree
// of the polynomial fitted in eps to reach eps -> 0.
struct AbelSchedule {
    std::vector<double> epsilons;
    int extrapolation_order = 3;

    // {0.2, 0.1, 0.05, 0.025, 0.0125}, order 3.
    static AbelSchedule standard();
    // 0.02 * 2^-k, k = 0..4, order 4; needed for the triple-Bessel integrals
    // whose smallest beat frequency is O(0.3).
    static AbelSchedule fine();
    static AbelSchedule geometric(double first, int count, int order);

    // throws std::invalid_argument when the invariants fail
    void validate() const;
};

struct FiniteOptions {
    double abs_floor = 1e-14;
    std::size_t max_evaluations = 4'000'000;
};

// Adaptive Gauss-Kronrod (10/21) with bisection of the worst panel.
QuadratureResult adaptiveFinite(const CplxFn& f, double a, double b, double tol,
                                const FiniteOptions& opt = {});
QuadratureResult adaptiveFinite(const RealFn& f, double a, double b, double tol,
                                const FiniteOptions& opt = {});

struct OscillatoryOptions {
    double panel_width = 1.0;     // fixed partition of [0, U] into panels
    double panel_tol = 1e-11;     // relative tolerance inside a panel
    double truncation = 40.0;     // U = truncation / min(eps)
    // extrapolation spread above this fraction of max |I(eps)| means divergence
    double divergence_ratio = 1e-2;
};

// Abel-regularized semi-infinite integral with polynomial extrapolation in eps.
// Every eps is accumulated from the same integrand samples.
QuadratureResult oscillatorySemiInfinite(const CplxFn& f, const AbelSchedule& sched,
                                         const OscillatoryOptions& opt = {});

struct AbelTable {
    std::vector<double> epsilons;
    std::vector<cplx> values;
    std::vector<double> errors;
    std::size_t evaluations = 0;
};

// The damped integrals themselves, before extrapolation.
AbelTable abelDamped(const CplxFn& f, const std::vector<double>& epsilons,
                     const OscillatoryOptions& opt = {});

// Least-squares polynomial extrapolation of (eps_k, I_k) to eps = 0.
QuadratureResult extrapolateToZero(const AbelTable& table, int order,
                                   double divergence_ratio = 1e-2);

// H_nu[g](u) = int_0^inf t g(t) J_nu(u t) dt. Integrated directly while the
// integrand envelope decays; falls back to Abel regularization otherwise.
QuadratureResult hankelTransform(double nu, const RealFn& g, double u,
                                 const AbelSchedule& sched = AbelSchedule::standard());

// Cross-check oracle: integrate over consecutive panels of width `step`
// and accelerate the partial sums with Wynn's epsilon algorithm.
QuadratureResult partitionedOscillatory(const CplxFn& f, double step, int panels);

cplx wynnEpsilon(const std::vector<cplx>& partial_sums);

struct GaussRule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre rule with n nodes (cached, thread-safe).
const GaussRule& gaussLegendre(int n);

// Composite Gauss-Legendre nodes/weights on [a, b].
void compositeGauss(double a, double b, int panels, int n,
                    std::vector<double>& x, std::vector<double>& w);

} // namespace gffads
