#include "gffads/stress.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "gffads/errors.hpp"
#include "gffads/quadrature.hpp"

namespace gffads {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double c2pi = 1.0 / (2.0 * pi);

void need2d(const TestFunction& f, const char* who) {
    if (f.dim() != 2)
        throw std::invalid_argument(std::string(who) + ": d = 2 only");
}

double eta(int mu, int nu) { return mu != nu ? 0.0 : (mu == 0 ? 1.0 : -1.0); }

// kernel on lower-index components, no checks
double kernelLower(const double* k1, const double* k2, int e1, int e2, int mu, int nu, double imp) {
    const double e = double(e1 * e2);
    const double dot = k1[0] * k2[0] - k1[1] * k2[1];
    const double s1 = k1[0] * k1[0] - k1[1] * k1[1];
    const double s2 = k2[0] * k2[0] - k2[1] * k2[1];
    const double et = eta(mu, nu);
    double T = -e * 0.5 * (k1[mu] * k2[nu] + k1[nu] * k2[mu]) + 0.5 * et * (e * dot + 0.5 * (s1 + s2));
    double K = 2.0 * T;
    if (imp != 0.0) {
        const double q[2] = {e1 * k1[0] + e2 * k2[0], e1 * k1[1] + e2 * k2[1]};
        const double q2 = q[0] * q[0] - q[1] * q[1];
        K += 2.0 * imp * (et * q2 - q[mu] * q[nu]);
    }
    return K;
}

// region in (k0, k1) where a transform is non-negligible, from the Gaussian alone
struct KBox {
    double c[2];
    double w[2];
};

KBox boxOf(const TestFunction& f, double sign, double cut) {
    KBox b{};
    for (int mu = 0; mu < 2; ++mu) {
        b.c[mu] = sign * f.carrier()[mu];
        b.w[mu] = (cut + 1.5) / f.widths()[mu];
    }
    return b;
}

struct Interval {
    double lo, hi;
    bool clipped;
};

Interval lightconeRange(const KBox& b, double sign) {
    const double mid = b.c[0] + sign * b.c[1];
    const double half = b.w[0] + b.w[1];
    Interval iv{mid - half, mid + half, false};
    if (iv.lo <= 0.0) {
        iv.lo = 0.0;
        iv.clipped = true;
    }
    return iv;
}

// Gauss-Legendre on an interval; clipped at 0 it is mapped by k = u^2
void rule(const Interval& iv, int panels, int order, std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    if (!(iv.hi > iv.lo))
        return;
    if (iv.clipped) {
        std::vector<double> u, uw;
        compositeGauss(0.0, std::sqrt(iv.hi), panels, order, u, uw);
        for (std::size_t i = 0; i < u.size(); ++i) {
            x.push_back(u[i] * u[i]);
            w.push_back(2.0 * u[i] * uw[i]);
        }
    } else {
        compositeGauss(iv.lo, iv.hi, panels, order, x, w);
    }
}

// Geometry and factors of one ordering.
struct Layout {
    int e1 = 1, e2 = -1;
    double a = 1.0;     // the argument of f^ is q with k2 = a k1 + b (+ spread)
    double b[2] = {0, 0};
    bool plus1 = false; // f1 enters through fourierPlus
    bool plus2 = true;
    KBox box1{}, box2{}, boxf{};

    Layout(Ordering ord, const TestFunction& f, const TestFunction& f1, const TestFunction& f2, double cut) {
        const MinkVector& cf = f.carrier();
        switch (ord) {
        case Ordering::Middle: // f^(k1 - k2)
            e1 = 1, e2 = -1, a = 1.0, b[0] = -cf[0], b[1] = -cf[1];
            plus1 = false, plus2 = true;
            break;
        case Ordering::ThetaFirst: // f^(-k1 - k2)
            e1 = -1, e2 = -1, a = -1.0, b[0] = -cf[0], b[1] = -cf[1];
            plus1 = true, plus2 = true;
            break;
        case Ordering::ThetaLast: // f^(k1 + k2)
            e1 = 1, e2 = 1, a = -1.0, b[0] = cf[0], b[1] = cf[1];
            plus1 = false, plus2 = false;
            break;
        }
        box1 = boxOf(f1, plus1 ? 1.0 : -1.0, cut);
        box2 = boxOf(f2, plus2 ? 1.0 : -1.0, cut);
        boxf = boxOf(f, 1.0, cut);
    }

    // argument of f^ for upper-index k1, k2
    MinkVector qArg(const MinkVector& k1, const MinkVector& k2) const {
        return MinkVector{e1 * k1[0] + e2 * k2[0], e1 * k1[1] + e2 * k2[1]};
    }

    // up to two intervals of k2^1 = y on the shell k2^2 = m2
    int yWindows(const MinkVector& k1, double m2, Interval out[2]) const {
        double ylo = box2.c[1] - box2.w[1];
        double yhi = box2.c[1] + box2.w[1];
        const double fc1 = a * k1[1] + b[1];
        ylo = std::max(ylo, fc1 - boxf.w[1]);
        yhi = std::min(yhi, fc1 + boxf.w[1]);
        const double fc0 = a * k1[0] + b[0];
        const double T = std::min(box2.c[0] + box2.w[0], fc0 + boxf.w[0]);
        const double A = std::max(box2.c[0] - box2.w[0], fc0 - boxf.w[0]);
        if (!(T > 0.0) || T * T <= m2)
            return 0;
        const double r = std::sqrt(T * T - m2);
        ylo = std::max(ylo, -r);
        yhi = std::min(yhi, r);
        if (!(yhi > ylo))
            return 0;
        if (A > 0.0 && A * A > m2) {
            const double ra = std::sqrt(A * A - m2);
            int n = 0;
            if (std::min(yhi, -ra) > ylo)
                out[n++] = {ylo, std::min(yhi, -ra), false};
            if (yhi > std::max(ylo, ra))
                out[n++] = {std::max(ylo, ra), yhi, false};
            return n;
        }
        out[0] = {ylo, yhi, false};
        return 1;
    }

    // k2^2 range compatible with both constraints on k2
    Interval s2Range(const MinkVector& k1) const {
        auto range = [](double c0, double w0, double c1, double w1) {
            const double hi0 = c0 + w0;
            if (!(hi0 > 0.0))
                return Interval{0.0, 0.0, false};
            const double lo0 = std::max(0.0, c0 - w0);
            const double kmin = (c1 - w1 <= 0.0 && c1 + w1 >= 0.0) ? 0.0 : std::min(std::fabs(c1 - w1), std::fabs(c1 + w1));
            const double kmax = std::max(std::fabs(c1 - w1), std::fabs(c1 + w1));
            return Interval{std::max(0.0, lo0 * lo0 - kmax * kmax), hi0 * hi0 - kmin * kmin, false};
        };
        const Interval r2 = range(box2.c[0], box2.w[0], box2.c[1], box2.w[1]);
        const Interval rf = range(a * k1[0] + b[0], boxf.w[0], a * k1[1] + b[1], boxf.w[1]);
        Interval r{std::max(r2.lo, rf.lo), std::min(r2.hi, rf.hi), false};
        if (r.lo <= 0.0) {
            r.lo = 0.0;
            r.clipped = true;
        }
        return r;
    }
};

struct Component {
    TestFunction f;
    int mu, nu;
};

// Accumulates h1 F1 K F F2 / (2 omega) over the y windows for each component.
struct ShellSum {
    const Layout& L;
    const std::vector<Component>& comps;
    const WeightFunction& h2;
    const TestFunction& f2;
    double imp;
    int panels, order;

    void add(const MinkVector& k1, const double* k1l, double s2, cplx pre, std::vector<cplx>& acc) const {
        const double hv2 = h2(s2);
        if (hv2 == 0.0)
            return;
        Interval win[2];
        const int nw = L.yWindows(k1, s2, win);
        std::vector<double> y, wy;
        for (int iw = 0; iw < nw; ++iw) {
            compositeGauss(win[iw].lo, win[iw].hi, panels, order, y, wy);
            for (std::size_t j = 0; j < y.size(); ++j) {
                const double om = std::sqrt(y[j] * y[j] + s2);
                const MinkVector k2{om, y[j]};
                const double k2l[2] = {om, -y[j]};
                const cplx F2 = L.plus2 ? f2.fourierPlus(k2) : f2.fourierMinus(k2);
                const MinkVector q = L.qArg(k1, k2);
                const cplx base = pre * hv2 * F2 * (wy[j] / (2.0 * om));
                for (std::size_t c = 0; c < comps.size(); ++c) {
                    const double K = kernelLower(k1l, k2l, L.e1, L.e2, comps[c].mu, comps[c].nu, imp);
                    acc[c] += base * K * comps[c].f.fourierPlus(q);
                }
            }
        }
    }
};

std::vector<cplx> setSum(const std::vector<Component>& comps, const WeightFunction& h1, const TestFunction& f1,
                         const WeightFunction& h2, const TestFunction& f2, Ordering ord, const SETOptions& opt,
                         int p1, int p2) {
    const Layout L(ord, comps.front().f, f1, f2, opt.cut);
    std::vector<double> kp, wp, km, wm;
    rule(lightconeRange(L.box1, 1.0), p1, opt.order, kp, wp);
    rule(lightconeRange(L.box1, -1.0), p1, opt.order, km, wm);
    std::vector<cplx> acc(comps.size(), 0.0);
    const ShellSum shell{L, comps, h2, f2, opt.improvement, p2, opt.order};
    for (std::size_t i = 0; i < kp.size(); ++i) {
        for (std::size_t j = 0; j < km.size(); ++j) {
            const double s1 = kp[i] * km[j];
            if (!(s1 > 0.0))
                continue;
            const double hv1 = h1(s1);
            if (hv1 == 0.0)
                continue;
            const MinkVector k1{0.5 * (kp[i] + km[j]), 0.5 * (kp[i] - km[j])};
            const double k1l[2] = {k1[0], -k1[1]};
            const cplx F1 = L.plus1 ? f1.fourierPlus(k1) : f1.fourierMinus(k1);
            // d^2k1 = dk+ dk- / 2
            const cplx pre = 0.5 * wp[i] * wm[j] * hv1 * F1;
            shell.add(k1, k1l, s1, pre, acc);
        }
    }
    for (auto& a : acc) a *= c2pi * c2pi;
    return acc;
}

std::vector<Correlator> setElements(const std::vector<Component>& comps, const WeightFunction& h1,
                                    const TestFunction& f1, const WeightFunction& h2, const TestFunction& f2,
                                    Ordering ord, const SETOptions& opt) {
    if (opt.k1_panels < 1 || opt.k2_panels < 1 || opt.order < 2)
        throw std::invalid_argument("setMatrixElement: grid too small");
    need2d(f1, "setMatrixElement");
    need2d(f2, "setMatrixElement");
    for (const auto& c : comps) {
        need2d(c.f, "setMatrixElement");
        if (c.mu < 0 || c.mu > 1 || c.nu < 0 || c.nu > 1)
            throw std::invalid_argument("setMatrixElement: index out of range for d = 2");
    }
    std::vector<Correlator> out(comps.size());
    if (h1.isZero() || h2.isZero())
        return out;
    const auto fine = setSum(comps, h1, f1, h2, f2, ord, opt, opt.k1_panels, opt.k2_panels);
    std::vector<cplx> coarse;
    if (opt.error_estimate)
        coarse = setSum(comps, h1, f1, h2, f2, ord, opt, (opt.k1_panels + 1) / 2, (opt.k2_panels + 1) / 2);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        out[c].value = fine[c];
        out[c].error_estimate = opt.error_estimate ? std::abs(fine[c] - coarse[c]) + 1e-15 * std::abs(fine[c]) : 0.0;
    }
    return out;
}

TestFunction lowerX(const TestFunction& f, int mu) {
    return mu == 0 ? f.timesX(0) : f.timesX(mu).scaled(-1.0);
}

TestFunction upperDerivative(const TestFunction& f, int mu) {
    return mu == 0 ? f.derivative(0) : f.derivative(mu).scaled(-1.0);
}

double relDev(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

bool decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1]))
            return false;
    return true;
}
} // namespace

std::string toString(Ordering o) {
    switch (o) {
    case Ordering::ThetaFirst: return "theta-first";
    case Ordering::Middle: return "middle";
    case Ordering::ThetaLast: return "theta-last";
    }
    return "?";
}

double setKernel(const MinkVector& k1, const MinkVector& k2, int e1, int e2, int mu, int nu, double improvement) {
    if (k1.dim() != 2 || k2.dim() != 2)
        throw std::invalid_argument("setKernel: d = 2 only");
    if (std::abs(e1) != 1 || std::abs(e2) != 1)
        throw std::invalid_argument("setKernel: signs must be +1 or -1");
    if (mu < 0 || mu > 1 || nu < 0 || nu > 1)
        throw std::invalid_argument("setKernel: index out of range");
    auto inCone = [](const MinkVector& k) { return k[0] > std::fabs(k[1]); };
    if (!inCone(k1) || !inCone(k2))
        throw std::invalid_argument("setKernel: momenta must lie in the open forward cone");
    const double a[2] = {k1[0], -k1[1]};
    const double b[2] = {k2[0], -k2[1]};
    return kernelLower(a, b, e1, e2, mu, nu, improvement);
}

Correlator setMatrixElement(const TestFunction& f, const WeightFunction& h1, const TestFunction& f1,
                            const WeightFunction& h2, const TestFunction& f2, int mu, int nu, int d, Ordering ord,
                            const SETOptions& opt) {
    if (d != 2)
        throw std::invalid_argument("setMatrixElement: d = 2 only");
    return setElements({{f, mu, nu}}, h1, f1, h2, f2, ord, opt).front();
}

// ---------------------------------------------------------------- Monte Carlo

namespace {
// integrand of the middle ordering in (k1^0, k1^1, y = k2^1), d^2k1 dy / (2 omega)
struct McIntegrand {
    const TestFunction &f, &f1, &f2;
    const WeightFunction &h1, &h2;
    int mu, nu;

    cplx operator()(const Eigen::Vector3d& x) const {
        const double k0 = x[0], kx = x[1], y = x[2];
        if (!(k0 > std::fabs(kx)))
            return 0.0;
        const double s = k0 * k0 - kx * kx;
        const double hh = h1(s) * h2(s);
        if (hh == 0.0)
            return 0.0;
        const double om = std::sqrt(y * y + s);
        const MinkVector k1{k0, kx}, k2{om, y};
        const double a1[2] = {k0, -kx}, a2[2] = {om, -y};
        const double K = kernelLower(a1, a2, 1, -1, mu, nu, 0.0);
        return c2pi * c2pi * hh * K * f1.fourierMinus(k1) * f.fourierPlus(k1 - k2) * f2.fourierPlus(k2) / (2.0 * om);
    }
};

struct GaussProposal {
    Eigen::Vector3d mean;
    Eigen::Matrix3d L; // Cholesky factor of the covariance
    double norm = 0.0; // (2 pi)^{3/2} det L

    void finish() { norm = std::pow(2.0 * pi, 1.5) * L.diagonal().prod(); }
    Eigen::Vector3d draw(const Eigen::Vector3d& z) const { return mean + L * z; }
    double pdf(const Eigen::Vector3d& z) const { return std::exp(-0.5 * z.squaredNorm()) / norm; }
};

std::mt19937_64 shardEngine(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32), stream};
    return std::mt19937_64(seq);
}
} // namespace

Correlator setMatrixElementMC(const TestFunction& f, const WeightFunction& h1, const TestFunction& f1,
                              const WeightFunction& h2, const TestFunction& f2, int mu, int nu,
                              const MonteCarloOptions& opt) {
    need2d(f, "setMatrixElementMC");
    need2d(f1, "setMatrixElementMC");
    need2d(f2, "setMatrixElementMC");
    if (opt.shards < 1 || opt.samples < static_cast<std::size_t>(opt.shards) || !(opt.widen > 0.0))
        throw std::invalid_argument("setMatrixElementMC: bad sampling options");
    if (mu < 0 || mu > 1 || nu < 0 || nu > 1)
        throw std::invalid_argument("setMatrixElementMC: index out of range for d = 2");
    const McIntegrand F{f, f1, f2, h1, h2, mu, nu};

    // Pilot proposal from the packet Gaussians: k1 from |f1~(k1)| times |f2^(k1 - q)|
    // averaged over q ~ |f^(q)|, y from the two Gaussians constraining k2^1.
    GaussProposal pilot;
    pilot.L.setZero();
    double vy = 0.0;
    {
        for (int m = 0; m < 2; ++m) {
            const double v1 = 1.0 / (f1.widths()[m] * f1.widths()[m]);
            const double v2 = 1.0 / (f2.widths()[m] * f2.widths()[m]) + 1.0 / (f.widths()[m] * f.widths()[m]);
            const double v = 1.0 / (1.0 / v1 + 1.0 / v2);
            pilot.mean[m] = v * (-f1.carrier()[m] / v1 + (f2.carrier()[m] + f.carrier()[m]) / v2);
            pilot.L(m, m) = 2.0 * std::sqrt(v);
        }
        const double p2 = f2.widths()[1] * f2.widths()[1], pf = f.widths()[1] * f.widths()[1];
        pilot.mean[2] = (p2 * f2.carrier()[1] + pf * (pilot.mean[1] - f.carrier()[1])) / (p2 + pf);
        vy = 1.0 / (p2 + pf) + pilot.L(1, 1) * pilot.L(1, 1) / 4.0;
        pilot.L(2, 2) = 2.0 * std::sqrt(vy);
        pilot.finish();
    }
    // weighted moments of |integrand| under the pilot fix the final Gaussian
    GaussProposal prop = pilot;
    {
        auto rng = shardEngine(opt.seed, 0xfffffff0u);
        std::normal_distribution<double> N(0.0, 1.0);
        const std::size_t np = std::clamp<std::size_t>(opt.samples / 50, 2000, 200000);
        double W = 0.0;
        Eigen::Vector3d m1 = Eigen::Vector3d::Zero();
        Eigen::Matrix3d m2 = Eigen::Matrix3d::Zero();
        for (std::size_t i = 0; i < np; ++i) {
            const Eigen::Vector3d z(N(rng), N(rng), N(rng));
            const Eigen::Vector3d x = pilot.draw(z);
            const double w = std::abs(F(x)) / pilot.pdf(z);
            W += w;
            m1 += w * x;
            m2 += w * x * x.transpose();
        }
        if (W > 0.0) {
            const Eigen::Vector3d mean = m1 / W;
            const Eigen::Matrix3d cov = m2 / W - mean * mean.transpose();
            Eigen::LLT<Eigen::Matrix3d> llt(cov * (opt.widen * opt.widen));
            if (llt.info() == Eigen::Success) {
                prop.mean = mean;
                prop.L = llt.matrixL();
                prop.finish();
            }
        }
    }

    struct Acc {
        cplx sum = 0.0;
        double sq = 0.0;
    };
    std::vector<Acc> shards(static_cast<std::size_t>(opt.shards));
    const std::size_t base = opt.samples / opt.shards;
    const std::size_t extra = opt.samples % opt.shards;
    auto runShard = [&](int s) {
        auto rng = shardEngine(opt.seed, static_cast<std::uint32_t>(s));
        std::normal_distribution<double> N(0.0, 1.0);
        const std::size_t n = base + (static_cast<std::size_t>(s) < extra ? 1 : 0);
        Acc a;
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector3d z(N(rng), N(rng), N(rng));
            const cplx v = F(prop.draw(z)) / prop.pdf(z);
            a.sum += v;
            a.sq += std::norm(v);
        }
        shards[static_cast<std::size_t>(s)] = a;
    };

    int nt = opt.threads > 0 ? opt.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nt = std::min(nt, opt.shards);
    if (nt <= 1) {
        for (int s = 0; s < opt.shards; ++s) runShard(s);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (int s = t; s < opt.shards; s += nt) runShard(s);
            });
        for (auto& th : pool) th.join();
    }
    // fixed-order reduction
    cplx sum = 0.0;
    double sq = 0.0;
    for (const auto& a : shards) {
        sum += a.sum;
        sq += a.sq;
    }
    const double n = static_cast<double>(opt.samples);
    const cplx mean = sum / n;
    const double var = std::max(0.0, (sq - n * std::norm(mean)) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

// ---------------------------------------------------------------- checks

ConservationReport conservationCheck(const TestFunction& f, const WeightFunction& h1, const TestFunction& f1,
                                     const WeightFunction& h2, const TestFunction& f2, int nu, int d, Ordering ord,
                                     const SETOptions& opt) {
    if (d != 2)
        throw std::invalid_argument("conservationCheck: d = 2 only");
    SETOptions o = opt;
    o.error_estimate = false;
    const std::vector<Component> comps{{upperDerivative(f, 0), 0, nu}, {upperDerivative(f, 1), 1, nu}};
    const auto r = setElements(comps, h1, f1, h2, f2, ord, o);
    ConservationReport rep;
    rep.contraction = r[0].value + r[1].value;
    rep.scale = std::max(std::abs(r[0].value), std::abs(r[1].value));
    rep.relative = rep.scale > 0.0 ? std::abs(rep.contraction) / rep.scale : 0.0;
    rep.pass = rep.relative <= rep.tolerance;
    return rep;
}

TestFunction densitySmearing(double tau, double s) {
    if (!(tau > 0.0) || !(s > 0.0))
        throw std::invalid_argument("densitySmearing: widths must be positive");
    return TestFunction(MinkVector{0.0, 0.0}, {tau, s}, MinkVector{0.0, 0.0},
                        {Monomial{1.0 / (std::sqrt(2.0 * pi) * tau), {0, 0}}});
}

cplx oneParticleElement(const GeneratorKind& G, const WeightFunction& h1, const TestFunction& f1,
                        const WeightFunction& h2, const TestFunction& f2, int grid_nodes) {
    need2d(f1, "oneParticleElement");
    need2d(f2, "oneParticleElement");
    const KBox b1 = boxOf(f1, -1.0, 8.5), b2 = boxOf(f2, 1.0, 8.5);
    double kmax = 0.0;
    for (const KBox* b : {&b1, &b2})
        for (double s : {1.0, -1.0}) kmax = std::max(kmax, lightconeRange(*b, s).hi);
    const auto grid = LightconeGrid::make(grid_nodes, kmax);
    const double c = 1.0 / std::sqrt(2.0 * pi);
    const ModeFunction left = ModeFunction::sample(grid, [&](double kp, double km) -> cplx {
        const MinkVector k{0.5 * (kp + km), 0.5 * (kp - km)};
        return std::conj(c * h1(kp * km) * f1.fourierMinus(k));
    });
    const ModeFunction right = ModeFunction::fromPacket(grid, h2, f2);
    return innerProduct(left, applyGenerator(G, right));
}

DensityReport momentumDensityCheck(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                                   const TestFunction& f2, int nu, const std::vector<double>& broadening, double tau,
                                   double tolerance, const SETOptions& opt) {
    if (broadening.empty())
        throw std::invalid_argument("momentumDensityCheck: empty broadening sequence");
    DensityReport rep;
    rep.tolerance = tolerance;
    rep.limit = oneParticleElement(GeneratorKind::P(nu), h1, f1, h2, f2);
    std::vector<double> dev;
    for (double s : broadening) {
        const cplx v = setMatrixElement(densitySmearing(tau, s), h1, f1, h2, f2, 0, nu, 2, Ordering::Middle, opt).value;
        rep.rows.push_back({s, v, relDev(v, rep.limit)});
        dev.push_back(rep.rows.back().deviation);
    }
    rep.monotone = decreasing(dev);
    rep.pass = rep.monotone && dev.back() <= tolerance;
    return rep;
}

DensityReport lorentzDensityCheck(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                                  const TestFunction& f2, int mu, int nu, const std::vector<double>& broadening,
                                  double tau, double tolerance, const SETOptions& opt) {
    if (broadening.empty())
        throw std::invalid_argument("lorentzDensityCheck: empty broadening sequence");
    if (mu == nu)
        throw std::invalid_argument("lorentzDensityCheck: mu and nu must differ");
    DensityReport rep;
    rep.tolerance = tolerance;
    // int (x_mu Theta_0nu - x_nu Theta_0mu) generates -M_mu_nu in the momentum representation
    rep.limit = -oneParticleElement(GeneratorKind::M(mu, nu), h1, f1, h2, f2);
    std::vector<double> dev;
    SETOptions o = opt;
    o.error_estimate = false;
    for (double s : broadening) {
        const TestFunction g = densitySmearing(tau, s);
        const auto r = setElements({{lowerX(g, mu), 0, nu}, {lowerX(g, nu), 0, mu}}, h1, f1, h2, f2,
                                   Ordering::Middle, o);
        const cplx v = r[0].value - r[1].value;
        rep.rows.push_back({s, v, relDev(v, rep.limit)});
        dev.push_back(rep.rows.back().deviation);
    }
    rep.monotone = decreasing(dev);
    rep.pass = rep.monotone && dev.back() <= tolerance;
    return rep;
}

TraceReport traceCheck(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                       const TestFunction& f2, const TestFunction& f, const SETOptions& opt) {
    const auto r = setElements({{f, 0, 0}, {f, 1, 1}}, h1, f1, h2, f2, Ordering::Middle, opt);
    TraceReport rep;
    rep.me00 = r[0].value;
    rep.me11 = r[1].value;
    rep.trace = rep.me00 - rep.me11;
    rep.error_estimate = r[0].error_estimate + r[1].error_estimate;
    rep.nonzero = std::abs(rep.trace) > 10.0 * rep.error_estimate;
    return rep;
}

LocalityReport commutatorLocalityCheck(const TestFunction& f, const WeightFunction& h1, const TestFunction& f1,
                                       const WeightFunction& h, const TestFunction& g, int mu, int nu,
                                       double tolerance, const SETOptions& opt) {
    SETOptions o = opt;
    o.error_estimate = false;
    LocalityReport rep;
    rep.tolerance = tolerance;
    rep.middle = setMatrixElement(f, h1, f1, h, g, mu, nu, 2, Ordering::Middle, o).value;
    rep.last = setMatrixElement(f, h1, f1, h, g, mu, nu, 2, Ordering::ThetaLast, o).value;
    const double scale = std::max(std::abs(rep.middle), std::abs(rep.last));
    rep.relative = scale > 0.0 ? std::abs(rep.middle - rep.last) / scale : 0.0;
    rep.pass = rep.relative <= tolerance;
    return rep;
}

// ---------------------------------------------------------------- vacuum fluctuation

std::vector<double> defaultSigmaSequence() {
    std::vector<double> s;
    for (int k = 0; k < 6; ++k) s.push_back(0.2 * std::ldexp(1.0, -k));
    return s;
}

namespace {
// 1/2 (2 pi)^-2 int d^2k1 d^2k2 |h(t) K00(k1, k2) f^(k1 + k2)|^2 with
// k2 = sqrt(s2) (cosh eta, sinh eta), s2 = k1^2 + t, d^2k2 = ds2 deta / 2.
double fluctuation(const TestFunction& f, const std::function<double(double)>& h, double width, int t_order,
                   const FluctuationOptions& opt) {
    const KBox bf = boxOf(f, 1.0, 8.5);
    const Interval qp = lightconeRange(bf, 1.0), qm = lightconeRange(bf, -1.0);
    if (!(qp.hi > 0.0) || !(qm.hi > 0.0))
        return 0.0;
    std::vector<double> kp, wp, km, wm;
    rule({0.0, qp.hi, true}, 2, opt.k_nodes / 2, kp, wp);
    rule({0.0, qm.hi, true}, 2, opt.k_nodes / 2, km, wm);
    std::vector<double> t, wt, e, we;
    const double T = 9.0 * width;
    double sum = 0.0;
    for (std::size_t i = 0; i < kp.size(); ++i) {
        for (std::size_t j = 0; j < km.size(); ++j) {
            const double s1 = kp[i] * km[j];
            const double k1[2] = {0.5 * (kp[i] + km[j]), -0.5 * (kp[i] - km[j])}; // lower
            const double rp = qp.hi - kp[i], rm = qm.hi - km[j];
            if (!(rp > 0.0) || !(rm > 0.0))
                continue;
            // s2 in [max(0, s1 - T), s1 + T]. Clipped at s2 = 0 the rapidity range
            // grows like log(1/s2), so the rule is graded as s2 = S v^4 there.
            if (s1 - T > 0.0) {
                compositeGauss(s1 - T, s1 + T, 8, t_order, t, wt);
            } else {
                std::vector<double> v, vw;
                compositeGauss(0.0, 1.0, 8, t_order, v, vw);
                t.resize(v.size());
                wt.resize(v.size());
                for (std::size_t a = 0; a < v.size(); ++a) {
                    const double v2 = v[a] * v[a];
                    t[a] = (s1 + T) * v2 * v2;
                    wt[a] = 4.0 * (s1 + T) * v2 * v[a] * vw[a];
                }
            }
            double row = 0.0;
            for (std::size_t a = 0; a < t.size(); ++a) {
                const double s2 = t[a];
                if (!(s2 > 0.0))
                    continue;
                const double hv = h(s2 - s1);
                if (hv == 0.0)
                    continue;
                const double r = std::sqrt(s2);
                const double elo = -std::log(rm / r), ehi = std::log(rp / r);
                if (!(ehi > elo))
                    continue;
                compositeGauss(elo, ehi, 2, opt.y_nodes / 2, e, we);
                double inner = 0.0;
                for (std::size_t b = 0; b < e.size(); ++b) {
                    const double p = r * std::exp(e[b]), m = r * std::exp(-e[b]);
                    const double k2[2] = {0.5 * (p + m), -0.5 * (p - m)};
                    const MinkVector q{k1[0] + k2[0], -(k1[1] + k2[1])};
                    const double K = kernelLower(k1, k2, 1, 1, 0, 0, 0.0);
                    inner += we[b] * K * K * std::norm(f.fourierPlus(q));
                }
                row += wt[a] * hv * hv * inner;
            }
            sum += wp[i] * wm[j] * row;
        }
    }
    // d^2k1 = dk+ dk- / 2, d^2k2 = ds2 deta / 2
    return 0.5 * c2pi * c2pi * 0.25 * sum;
}
} // namespace

FluctuationReport vacuumFluctuationDivergence(const std::vector<double>& sigmas, const TestFunction& f,
                                              const FluctuationOptions& opt) {
    need2d(f, "vacuumFluctuationDivergence");
    if (sigmas.size() < 2)
        throw std::invalid_argument("vacuumFluctuationDivergence: need at least two widths");
    for (double s : sigmas)
        if (!(s > 0.0))
            throw std::invalid_argument("vacuumFluctuationDivergence: widths must be positive");
    FluctuationReport rep;
    rep.sigmas = sigmas;
    auto gauss = [](double w) {
        return [w](double t) { return std::exp(-0.5 * t * t / (w * w)) / (std::sqrt(2.0 * pi) * w); };
    };
    const double w0 = opt.fixed_width;
    for (std::size_t k = 0; k < sigmas.size(); ++k) {
        rep.values.push_back(fluctuation(f, gauss(sigmas[k]), sigmas[k], opt.t_order, opt));
        // the fixed weight is integrated with a rule that changes along the sequence
        rep.fixed_values.push_back(fluctuation(f, gauss(w0), w0, opt.t_order + 2 * static_cast<int>(k), opt));
    }
    rep.increasing = true;
    for (std::size_t k = 1; k < sigmas.size(); ++k) {
        const bool finer = sigmas[k] < sigmas[k - 1];
        if (finer != (rep.values[k] > rep.values[k - 1]))
            rep.increasing = false;
    }
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < sigmas.size(); ++k) {
        lx.push_back(std::log(sigmas[k]));
        ly.push_back(std::log(rep.values[k]));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(lx.size());
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k], sy += ly[k], sxx += lx[k] * lx[k], sxy += lx[k] * ly[k];
    }
    rep.exponent = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double ref = rep.fixed_values.front();
    for (double v : rep.fixed_values) rep.fixed_spread = std::max(rep.fixed_spread, std::fabs(v - ref) / std::fabs(ref));
    return rep;
}

// ---------------------------------------------------------------- z-integrated weight

double zIntegralWeight(double nu, double Z, double m1sq, double m2sq) {
    if (!(Z > 0.0) || m1sq < 0.0 || m2sq < 0.0)
        throw std::invalid_argument("zIntegralWeight: need Z > 0 and non-negative masses");
    const double a = std::sqrt(m1sq), b = std::sqrt(m2sq);
    const RealFn fn = [&](double z) -> double { return z * besselJAnyOrder(nu, a * z) * besselJAnyOrder(nu, b * z); };
    auto r = adaptiveFinite(fn, 0.0, Z, 1e-12);
    return 0.5 * r.value.real();
}

double zIntegralWeightLommel(double nu, double Z, double m1sq, double m2sq) {
    if (!(Z > 0.0) || m1sq < 0.0 || m2sq < 0.0)
        throw std::invalid_argument("zIntegralWeightLommel: need Z > 0 and non-negative masses");
    if (nu <= -1.0)
        throw std::invalid_argument("zIntegralWeightLommel: needs nu > -1");
    const double a = std::sqrt(m1sq), b = std::sqrt(m2sq);
    if (std::fabs(a - b) * Z < 1e-2)
        return zIntegralWeight(nu, Z, m1sq, m2sq);
    const double aZ = a * Z, bZ = b * Z;
    const double num = a * besselJAnyOrder(nu + 1.0, aZ) * besselJAnyOrder(nu, bZ) -
                       b * besselJAnyOrder(nu, aZ) * besselJAnyOrder(nu + 1.0, bZ);
    return 0.5 * Z * num / (m1sq - m2sq);
}

DeltaConvergence zIntegralDeltaCheck(double nu, double Z, double m1sq, double center, double width) {
    if (!(width > 0.0) || !(m1sq > 0.0))
        throw std::invalid_argument("zIntegralDeltaCheck: need positive width and mass");
    auto g = [&](double s) { return std::exp(-0.5 * (s - center) * (s - center) / (width * width)); };
    const double lo = std::max(0.0, center - 12.0 * width), hi = center + 12.0 * width;
    // split at the diagonal, where the kernel peaks
    std::vector<double> cuts{lo};
    if (m1sq > lo && m1sq < hi)
        cuts.push_back(m1sq);
    cuts.push_back(hi);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const RealFn fn = [&](double m2) -> double { return zIntegralWeightLommel(nu, Z, m1sq, m2) * g(m2); };
        auto r = adaptiveFinite(fn, cuts[i], cuts[i + 1], 1e-10);
        s += r.value.real();
    }
    DeltaConvergence out;
    out.smeared = s;
    out.target = g(m1sq);
    out.rel_error = std::fabs(s - out.target) / std::fabs(out.target);
    return out;
}

ReductionReport adsSETReduction(double nu, const std::vector<double>& Z_sequence, const TestFunction& f,
                                const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                                const TestFunction& f2, int mu, int nu_index, const ReductionOptions& opt) {
    need2d(f, "adsSETReduction");
    need2d(f1, "adsSETReduction");
    need2d(f2, "adsSETReduction");
    if (Z_sequence.empty())
        throw std::invalid_argument("adsSETReduction: empty Z sequence");
    ReductionReport rep;
    SETOptions so;
    so.cut = opt.cut;
    rep.delta_value = setMatrixElement(f, h1, f1, h2, f2, mu, nu_index, 2, Ordering::Middle, so).value;

    std::vector<Component> comps{{f, mu, nu_index}};
    if (opt.conservation) {
        comps.push_back({upperDerivative(f, 0), 0, nu_index});
        comps.push_back({upperDerivative(f, 1), 1, nu_index});
    }
    const Layout L(Ordering::Middle, f, f1, f2, opt.cut);
    std::vector<double> kp, wp, km, wm, s2, w2;
    rule(lightconeRange(L.box1, 1.0), opt.k1_panels, opt.order, kp, wp);
    rule(lightconeRange(L.box1, -1.0), opt.k1_panels, opt.order, km, wm);
    const auto [h2lo, h2hi] = h2.support();
    std::vector<double> dev;
    for (double Z : Z_sequence) {
        if (!(Z > 0.0))
            throw std::invalid_argument("adsSETReduction: Z must be positive");
        std::vector<cplx> acc(comps.size(), 0.0);
        const ShellSum shell{L, comps, h2, f2, 0.0, opt.k2_panels, opt.order};
        for (std::size_t i = 0; i < kp.size(); ++i) {
            for (std::size_t j = 0; j < km.size(); ++j) {
                const double s1 = kp[i] * km[j];
                if (!(s1 > 0.0))
                    continue;
                const double hv1 = h1(s1);
                if (hv1 == 0.0)
                    continue;
                const MinkVector k1{0.5 * (kp[i] + km[j]), 0.5 * (kp[i] - km[j])};
                const double k1l[2] = {k1[0], -k1[1]};
                Interval r = L.s2Range(k1);
                r.lo = std::max(r.lo, h2lo);
                r.hi = std::min(r.hi, h2hi);
                if (r.lo > 0.0)
                    r.clipped = false;
                if (!(r.hi > r.lo))
                    continue;
                // panels follow the oscillation of the kernel, period ~ 4 pi m / Z in m2^2
                const double m = std::sqrt(std::max(s1, 0.25 * (r.lo + r.hi)));
                const int panels = std::clamp(static_cast<int>(std::ceil((r.hi - r.lo) * Z / (2.0 * pi * m))) + 2, 2, 400);
                rule(r, panels, opt.t_order, s2, w2);
                const cplx F1 = f1.fourierMinus(k1);
                for (std::size_t a = 0; a < s2.size(); ++a) {
                    if (!(s2[a] > 0.0))
                        continue;
                    const double W = zIntegralWeightLommel(nu, Z, s1, s2[a]);
                    // d^2k2 = ds2 dy / (2 omega); the y measure sits in ShellSum
                    const cplx pre = 0.5 * wp[i] * wm[j] * hv1 * F1 * (w2[a] * W);
                    shell.add(k1, k1l, s2[a], pre, acc);
                }
            }
        }
        for (auto& v : acc) v *= c2pi * c2pi;
        ReductionRow row;
        row.Z = Z;
        row.value = acc[0];
        row.deviation = relDev(acc[0], rep.delta_value);
        if (opt.conservation) {
            const double sc = std::max(std::abs(acc[1]), std::abs(acc[2]));
            row.conservation = sc > 0.0 ? std::abs(acc[1] + acc[2]) / sc : 0.0;
        }
        rep.rows.push_back(row);
        dev.push_back(row.deviation);
    }
    rep.monotone = decreasing(dev);
    rep.pass = dev.back() <= rep.tolerance;
    return rep;
}

} // namespace gffads
