#include "gffads/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "gffads/errors.hpp"

namespace gffads {

namespace {
constexpr double pi = std::numbers::pi;
}

LightconeAxis LightconeAxis::softplus(int n, double a, double kmin, double kmax) {
    if (n < 16)
        throw std::invalid_argument("lightcone axis needs at least 16 nodes");
    if (!(a > 0.0) || !(kmin > 0.0) || !(kmax > kmin))
        throw std::invalid_argument("lightcone axis: need a > 0 and 0 < kmin < kmax");
    LightconeAxis ax;
    const double t0 = std::log(std::expm1(kmin / a));
    const double t1 = kmax / a + std::log(-std::expm1(-kmax / a)); // log(expm1(kmax/a)) without overflow
    ax.h = (t1 - t0) / (n - 1);
    ax.t.resize(n);
    ax.k.resize(n);
    ax.dk.resize(n);
    ax.d2k.resize(n);
    ax.w.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = t0 + i * ax.h;
        const double s = 1.0 / (1.0 + std::exp(-t));
        ax.t[i] = t;
        ax.k[i] = a * (t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)));
        ax.dk[i] = a * s;
        ax.d2k[i] = a * s * (1.0 - s);
        ax.w[i] = ax.h * ax.dk[i] * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
    }
    return ax;
}

std::shared_ptr<const LightconeGrid> LightconeGrid::make(int n, double kmax, double a, double kmin_rel) {
    auto g = std::make_shared<LightconeGrid>();
    g->axis = LightconeAxis::softplus(n, a, kmin_rel * a, kmax);
    return g;
}

ModeFunction::ModeFunction(std::shared_ptr<const LightconeGrid> grid, std::vector<cplx> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
    if (!grid_)
        throw std::invalid_argument("ModeFunction: null grid");
    n_ = grid_->n();
    if (v_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("ModeFunction: sample count does not match grid");
}

ModeFunction ModeFunction::sample(std::shared_ptr<const LightconeGrid> grid,
                                  const std::function<cplx(double, double)>& fn) {
    const int n = grid->n();
    std::vector<cplx> v(static_cast<std::size_t>(n) * n);
    const auto& k = grid->axis.k;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(i) * n + j] = fn(k[i], k[j]);
    return ModeFunction(std::move(grid), std::move(v));
}

ModeFunction ModeFunction::fromPacket(std::shared_ptr<const LightconeGrid> grid, const WeightFunction& h,
                                      const TestFunction& f) {
    if (f.dim() != 2)
        throw std::invalid_argument("ModeFunction::fromPacket: d = 2 only");
    const double c = 1.0 / std::sqrt(2.0 * pi);
    return sample(std::move(grid), [&](double kp, double km) -> cplx {
        const MinkVector k{0.5 * (kp + km), 0.5 * (kp - km)};
        return c * h(kp * km) * f.fourierPlus(k);
    });
}

namespace {
void sameGrid(const ModeFunction& a, const ModeFunction& b) {
    if (a.grid() != b.grid())
        throw std::invalid_argument("mode functions live on different grids");
}
} // namespace

ModeFunction ModeFunction::operator+(const ModeFunction& o) const {
    sameGrid(*this, o);
    std::vector<cplx> v = v_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v_[i];
    return ModeFunction(grid_, std::move(v));
}

ModeFunction ModeFunction::operator-(const ModeFunction& o) const { return *this + o * cplx(-1.0); }

ModeFunction ModeFunction::operator*(cplx s) const {
    std::vector<cplx> v = v_;
    for (auto& x : v) x *= s;
    return ModeFunction(grid_, std::move(v));
}

double ModeFunction::norm() const { return std::sqrt(std::max(0.0, innerProduct(*this, *this).real())); }

cplx innerProduct(const ModeFunction& f, const ModeFunction& g) {
    sameGrid(f, g);
    const auto& w = f.grid()->axis.w;
    const int n = f.n();
    cplx s = 0.0;
    for (int i = 0; i < n; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < n; ++j) row += w[j] * std::conj(f.at(i, j)) * g.at(i, j);
        s += w[i] * row;
    }
    return 0.5 * s;
}

// ---------------------------------------------------------------- stencils

namespace {

// derivative in t of one line; `order` 1 or 2. Writes the plain estimate
// (step h) into plain when requested.
void lineDerivative(const cplx* f, std::ptrdiff_t stride, int n, double h, int order, bool rich,
                    cplx* out, cplx* plain) {
    auto F = [&](int i) { return f[i * stride]; };
    for (int i = 0; i < n; ++i) {
        cplx dh, d2h, r;
        const bool interior1 = i >= 1 && i <= n - 2;
        const bool interior2 = i >= 2 && i <= n - 3;
        if (order == 1) {
            if (interior1)
                dh = (F(i + 1) - F(i - 1)) / (2.0 * h);
            if (rich) {
                if (interior2) {
                    d2h = (F(i + 2) - F(i - 2)) / (4.0 * h);
                    r = (4.0 * dh - d2h) / 3.0;
                } else if (i < 2) {
                    // one-sided, fourth order, nodes i..i+4
                    r = (-25.0 * F(i) + 48.0 * F(i + 1) - 36.0 * F(i + 2) + 16.0 * F(i + 3) - 3.0 * F(i + 4)) /
                        (12.0 * h);
                } else {
                    r = -(-25.0 * F(i) + 48.0 * F(i - 1) - 36.0 * F(i - 2) + 16.0 * F(i - 3) - 3.0 * F(i - 4)) /
                        (12.0 * h);
                }
                if (!interior1)
                    dh = r;
            } else {
                if (!interior1) {
                    dh = i == 0 ? (-3.0 * F(0) + 4.0 * F(1) - F(2)) / (2.0 * h)
                                : (3.0 * F(i) - 4.0 * F(i - 1) + F(i - 2)) / (2.0 * h);
                }
                r = dh;
            }
        } else {
            if (interior1)
                dh = (F(i + 1) - 2.0 * F(i) + F(i - 1)) / (h * h);
            if (rich) {
                if (interior2) {
                    d2h = (F(i + 2) - 2.0 * F(i) + F(i - 2)) / (4.0 * h * h);
                    r = (4.0 * dh - d2h) / 3.0;
                } else {
                    // one-sided, fourth order, six nodes
                    const int s = i < 2 ? 1 : -1;
                    auto G = [&](int j) { return F(i + s * j); };
                    r = (45.0 * G(0) - 154.0 * G(1) + 214.0 * G(2) - 156.0 * G(3) + 61.0 * G(4) - 10.0 * G(5)) /
                        (12.0 * h * h);
                }
                if (!interior1)
                    dh = r;
            } else {
                if (!interior1) {
                    const int s = i == 0 ? 1 : -1;
                    auto G = [&](int j) { return F(i + s * j); };
                    dh = (2.0 * G(0) - 5.0 * G(1) + 4.0 * G(2) - G(3)) / (h * h);
                }
                r = dh;
            }
        }
        out[i * stride] = r;
        if (plain)
            plain[i * stride] = dh;
    }
}

double relDiff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(a[i]);
    }
    return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

// d^order/dt^order along axis (0: k+, 1: k-)
void tDerivative(const std::vector<cplx>& v, int n, double h, int axis, int order, bool rich,
                 std::vector<cplx>& out, std::vector<cplx>* plain) {
    out.assign(v.size(), 0.0);
    if (plain)
        plain->assign(v.size(), 0.0);
    for (int line = 0; line < n; ++line) {
        const std::ptrdiff_t base = axis == 0 ? line : static_cast<std::ptrdiff_t>(line) * n;
        const std::ptrdiff_t stride = axis == 0 ? n : 1;
        lineDerivative(v.data() + base, stride, n, h, order, rich, out.data() + base,
                       plain ? plain->data() + base : nullptr);
    }
}

} // namespace

ModeFunction derivative(const ModeFunction& f, int axis, int order, const StencilOptions& opt) {
    if (axis != 0 && axis != 1)
        throw std::invalid_argument("derivative: axis must be 0 (k+) or 1 (k-)");
    if (order != 1 && order != 2)
        throw std::invalid_argument("derivative: order 1 or 2");
    const auto& ax = f.grid()->axis;
    const int n = f.n();
    std::vector<cplx> f1, f2, p1, p2;
    tDerivative(f.values(), n, ax.h, axis, 1, opt.richardson, f1, opt.richardson ? &p1 : nullptr);
    if (opt.richardson && relDiff(f1, p1) > opt.tolerance)
        throw ResolutionError("grid too coarse for first derivative", relDiff(f1, p1));
    std::vector<cplx> out(f1.size());
    if (order == 2) {
        tDerivative(f.values(), n, ax.h, axis, 2, opt.richardson, f2, opt.richardson ? &p2 : nullptr);
        if (opt.richardson && relDiff(f2, p2) > opt.tolerance)
            throw ResolutionError("grid too coarse for second derivative", relDiff(f2, p2));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int a = axis == 0 ? i : j;
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            const double kp = ax.dk[a], kpp = ax.d2k[a];
            if (order == 1)
                out[idx] = f1[idx] / kp;
            else
                out[idx] = (f2[idx] - (kpp / kp) * f1[idx]) / (kp * kp);
        }
    return ModeFunction(f.grid(), std::move(out));
}

ModeFunction applyOperator(const sym::DiffOp& op, const ModeFunction& f, const StencilOptions& opt) {
    const auto& k = f.grid()->axis.k;
    const int n = f.n();
    std::map<std::pair<int, int>, ModeFunction> cache;
    auto deriv = [&](int p, int q) -> const ModeFunction& {
        auto key = std::make_pair(p, q);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        if (p > 2 || q > 2)
            throw std::invalid_argument("applyOperator: derivative order above 2");
        ModeFunction g = f;
        if (p > 0)
            g = derivative(g, 0, p, opt);
        if (q > 0)
            g = derivative(g, 1, q, opt);
        return cache.emplace(key, std::move(g)).first->second;
    };
    std::vector<cplx> out(static_cast<std::size_t>(n) * n, 0.0);
    for (auto& [key, c] : op.terms()) {
        auto [a, b, p, q] = key;
        const ModeFunction& g = deriv(p, q);
        for (int i = 0; i < n; ++i) {
            const double ka = std::pow(k[i], a);
            for (int j = 0; j < n; ++j) {
                const std::size_t idx = static_cast<std::size_t>(i) * n + j;
                out[idx] += c * ka * std::pow(k[j], b) * g.values()[idx];
            }
        }
    }
    return ModeFunction(f.grid(), std::move(out));
}

ModeFunction applyGenerator(const GeneratorKind& G, const ModeFunction& f, const StencilOptions& opt) {
    return applyOperator(sym::generatorOperator(G), f, opt);
}

ClosureReport algebraClosureCheck(const GeneratorKind& G1, const GeneratorKind& G2, const ModeFunction& f,
                                  double tolerance, const StencilOptions& opt) {
    double Delta = 1.0;
    if (G1.type == GenType::K)
        Delta = G1.Delta;
    if (G2.type == GenType::K) {
        if (G1.type == GenType::K && G1.Delta != G2.Delta)
            throw std::invalid_argument("algebraClosureCheck: K generators with different Delta");
        Delta = G2.Delta;
    }
    const auto op1 = sym::generatorOperator(G1), op2 = sym::generatorOperator(G2);
    ClosureReport rep;
    rep.name = "[" + G1.name() + "," + G2.name() + "]";
    rep.expected = sym::decompose(sym::commutator(op1, op2), Delta);
    if (rep.expected.residual > 1e-12)
        throw std::logic_error("commutator " + rep.name + " leaves the generator span");
    const ModeFunction g12 = applyOperator(op1, applyOperator(op2, f, opt), opt);
    const ModeFunction g21 = applyOperator(op2, applyOperator(op1, f, opt), opt);
    const ModeFunction lhs = g12 - g21;
    ModeFunction expected = f * rep.expected.coeffs[6];
    for (int i = 0; i < 6; ++i)
        if (rep.expected.coeffs[i] != cplx(0.0))
            expected = expected + applyGenerator(sym::basisGenerator(i, Delta), f, opt) * rep.expected.coeffs[i];
    const double en = expected.norm();
    rep.scale = en > 1e-8 * g12.norm() ? en : g12.norm();
    rep.discrepancy = rep.scale == 0.0 ? 0.0 : (lhs - expected).norm() / rep.scale;
    rep.tolerance = tolerance;
    rep.pass = rep.discrepancy <= tolerance;
    return rep;
}

TestFunction specialConformalAdjoint(const TestFunction& f, int mu, double Delta) {
    const int d = f.dim();
    if (mu < 0 || mu >= d)
        throw std::invalid_argument("specialConformalAdjoint: bad index");
    const double eta = mu == 0 ? 1.0 : -1.0;
    TestFunction xd = f.derivative(0).timesX(0);
    for (int nu = 1; nu < d; ++nu) xd = xd + f.derivative(nu).timesX(nu);
    const TestFunction dmu = f.derivative(mu);
    TestFunction x2d = dmu.timesX(0).timesX(0);
    for (int i = 1; i < d; ++i) x2d = x2d - dmu.timesX(i).timesX(i);
    const TestFunction a = xd.timesX(mu).scaled(2.0 * eta);
    const TestFunction c = f.timesX(mu).scaled(-2.0 * (Delta - d) * eta);
    return (a - x2d + c).scaled(cplx(0.0, 1.0));
}

FieldLawReport specialConformalFieldLaw(const TestFunction& f, int mu, double Delta, int d,
                                        std::shared_ptr<const LightconeGrid> grid, double tolerance) {
    if (d != 2)
        throw std::invalid_argument("specialConformalFieldLaw: d = 2 only");
    const double nu = Delta - 0.5 * d;
    const WeightFunction h = WeightFunction::power(nu);
    const ModeFunction psi = ModeFunction::fromPacket(grid, h, f);
    const ModeFunction lhs = applyGenerator(GeneratorKind::K(mu, Delta), psi);
    const ModeFunction rhs = ModeFunction::fromPacket(grid, h, specialConformalAdjoint(f, mu, Delta));
    FieldLawReport rep;
    rep.lhs_norm = lhs.norm();
    const double rn = rhs.norm();
    rep.discrepancy = (lhs - rhs).norm() / (rn > 0.0 ? rn : 1.0);
    rep.tolerance = tolerance;
    rep.pass = rep.discrepancy <= tolerance;
    return rep;
}

// ---------------------------------------------------------------- n-point

namespace {
cplx pairSum(std::vector<int>& idx, const std::function<cplx(int, int)>& pair) {
    if (idx.empty())
        return 1.0;
    const int first = idx.front();
    cplx total = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k) {
        const int partner = idx[k];
        std::vector<int> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t m = 1; m < idx.size(); ++m)
            if (m != k) rest.push_back(idx[m]);
        total += pair(first, partner) * pairSum(rest, pair);
    }
    return total;
}
} // namespace

cplx npoint(int n, const std::function<cplx(int, int)>& pair) {
    if (n < 0)
        throw std::invalid_argument("npoint: negative n");
    if (n % 2 == 1)
        return 0.0;
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    return pairSum(idx, pair);
}

cplx npoint(const std::vector<WeightFunction>& weights, const std::vector<TestFunction>& packets, int d,
            const SmearingGrid& grid) {
    if (weights.size() != packets.size())
        throw std::invalid_argument("npoint: weights and packets differ in length");
    const int n = static_cast<int>(weights.size());
    if (n % 2 == 1)
        return 0.0;
    std::map<std::pair<int, int>, cplx> memo;
    return npoint(n, [&](int i, int j) {
        auto key = std::make_pair(i, j);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        const cplx v = smeared2pt(weights[i], packets[i], weights[j], packets[j], d, grid).value;
        memo.emplace(key, v);
        return v;
    });
}

} // namespace gffads
