#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gffads/correlators.hpp"
#include "gffads/opalgebra.hpp"
#include "gffads/packet.hpp"

namespace gffads {

// One axis of the lightcone grid: k = a log(1 + e^t) on a uniform t grid,
// geometric near the cone tip and uniform far from it.
struct LightconeAxis {
    std::vector<double> t, k, dk, d2k; // k(t), k'(t), k''(t)
    std::vector<double> w;              // trapezoid weights for int dk
    double h = 0.0;

    static LightconeAxis softplus(int n, double a, double kmin, double kmax);
    int size() const { return static_cast<int>(k.size()); }
};

// Same axis for k+ and k-; sample (i, j) sits at (k+_i, k-_j).
struct LightconeGrid {
    LightconeAxis axis;

    static std::shared_ptr<const LightconeGrid> make(int n, double kmax, double a = 1.0,
                                                     double kmin_rel = 1e-3);
    int n() const { return axis.size(); }
};

// Wavefunction samples on a lightcone grid.
class ModeFunction {
public:
    ModeFunction() = default;
    ModeFunction(std::shared_ptr<const LightconeGrid> grid, std::vector<cplx> values);

    static ModeFunction sample(std::shared_ptr<const LightconeGrid> grid,
                               const std::function<cplx(double kp, double km)>& fn);
    // (2 pi)^{-1/2} h(k^2) f^(k): the one-particle vector phi_h(f) Omega
    static ModeFunction fromPacket(std::shared_ptr<const LightconeGrid> grid, const WeightFunction& h,
                                   const TestFunction& f);

    const std::shared_ptr<const LightconeGrid>& grid() const { return grid_; }
    const std::vector<cplx>& values() const { return v_; }
    cplx at(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
    int n() const { return n_; }

    ModeFunction operator+(const ModeFunction& o) const;
    ModeFunction operator-(const ModeFunction& o) const;
    ModeFunction operator*(cplx s) const;

    // grid L2 norm of the samples
    double norm() const;

private:
    std::shared_ptr<const LightconeGrid> grid_;
    std::vector<cplx> v_;
    int n_ = 0;
};

// int_{V+} conj(f) g d^2k, d^2k = dk+ dk- / 2
cplx innerProduct(const ModeFunction& f, const ModeFunction& g);

struct StencilOptions {
    bool richardson = true;    // combine steps h and 2h
    double tolerance = 2e-2;   // max |D_rich - D_h| / |D_rich| before ResolutionError
};

// Generator applied as a differential operator in (k+, k-).
ModeFunction applyGenerator(const GeneratorKind& G, const ModeFunction& f,
                            const StencilOptions& opt = {});
// Any symbolic operator with derivative order <= 2 per variable.
ModeFunction applyOperator(const sym::DiffOp& op, const ModeFunction& f,
                           const StencilOptions& opt = {});

// d/dk+ (axis 0) or d/dk- (axis 1), order 1 or 2
ModeFunction derivative(const ModeFunction& f, int axis, int order, const StencilOptions& opt = {});

struct ClosureReport {
    std::string name;
    sym::Decomposition expected;   // from the symbolic commutator
    double discrepancy = 0.0;      // |[G1,G2]f - expected f| / scale
    double scale = 0.0;            // |expected f|, or |G1 G2 f| when that vanishes
    bool pass = false;
    double tolerance = 0.0;
};

// [G1, G2] f on the grid vs the symbolic combination of generators.
ClosureReport algebraClosureCheck(const GeneratorKind& G1, const GeneratorKind& G2,
                                  const ModeFunction& f, double tolerance = 1e-4,
                                  const StencilOptions& opt = {});

// Position-space adjoint action of K_mu on a test function:
//   i [ (2 x_mu (x.d) - x^2 d_mu) f - 2 (Delta - d) x_mu f ]
TestFunction specialConformalAdjoint(const TestFunction& f, int mu, double Delta);

struct FieldLawReport {
    double discrepancy = 0.0; // relative L2
    double lhs_norm = 0.0;
    bool pass = false;
    double tolerance = 0.0;
};

// K_mu applied to h f^ (finite differences) vs h (K^dagger f)^ (exact transform),
// h = Power(nu) with nu = Delta - d/2.
FieldLawReport specialConformalFieldLaw(const TestFunction& f, int mu, double Delta, int d,
                                        std::shared_ptr<const LightconeGrid> grid,
                                        double tolerance = 1e-4);

// Gaussian n-point function: sum over perfect matchings of products of
// smeared2pt(h_i, f_i, h_j, f_j), i < j. Odd n gives 0.
cplx npoint(const std::vector<WeightFunction>& weights, const std::vector<TestFunction>& packets, int d,
            const SmearingGrid& grid = {});
// same recursion with a caller-supplied pair function (i < j)
cplx npoint(int n, const std::function<cplx(int, int)>& pair);

} // namespace gffads
