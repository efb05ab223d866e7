#include "gffads/adsboundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gffads/errors.hpp"
#include "gffads/specfun.hpp"

namespace gffads {

namespace {
constexpr double pi = std::numbers::pi;
}

void AdSFieldSpec::validate() const {
    if (!(nu > -1.0))
        throw std::invalid_argument("AdSFieldSpec: nu must exceed -1");
    if (nu < 0.0)
        throw std::invalid_argument("AdSFieldSpec: only the nu >= 0 quantization is implemented");
    if (d < 2)
        throw std::invalid_argument("AdSFieldSpec: d must be >= 2");
}

double boundaryConstant(double nu) { return std::pow(2.0, -nu - 0.5) / gamma(nu + 1.0); }

Correlator ads2pt(const AdSFieldSpec& spec, double z, double zp, const MinkVector& dx, double eps,
                  double cutoff) {
    spec.validate();
    const WeightFunction a = WeightFunction::besselZ(z, spec.nu, spec.d);
    const WeightFunction b = WeightFunction::besselZ(zp, spec.nu, spec.d);
    return gff2pt(a, b, dx, spec.d, eps, cutoff);
}

ModeFunction holographicLift(const AdSFieldSpec& spec, double z, const ModeFunction& fhat, LiftPath path) {
    spec.validate();
    if (spec.d != 2)
        throw std::invalid_argument("holographicLift: mode functions live on the d = 2 grid");
    if (!(z > 0.0))
        throw std::invalid_argument("holographicLift: z must be positive");
    const auto& k = fhat.grid()->axis.k;
    const int n = fhat.n();
    const double nu = spec.nu;
    const double pre = std::pow(z, 0.5 * spec.d) / std::numbers::sqrt2;
    std::vector<cplx> out(fhat.values().size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double k2 = k[i] * k[j];
            double hz;
            if (path == LiftPath::Bessel)
                hz = pre * besselJ(nu, z * std::sqrt(k2));
            else
                hz = pre * std::pow(z, nu) * std::pow(k2, 0.5 * nu) * jEven(nu, z * z * k2);
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            out[idx] = hz * fhat.values()[idx];
        }
    return ModeFunction(fhat.grid(), std::move(out));
}

std::vector<double> defaultBoundarySequence(const MinkVector& dx) {
    const double s = -dot(dx, dx);
    if (!(s > 0.0))
        throw std::invalid_argument("boundary limit needs spacelike dx");
    std::vector<double> z;
    for (int k = 0; k <= 6; ++k) z.push_back(0.2 * std::sqrt(s) * std::pow(0.5, k));
    return z;
}

BoundaryLimitReport boundaryLimitCheck(const AdSFieldSpec& spec, const std::vector<double>& z_sequence,
                                       const MinkVector& dx) {
    spec.validate();
    if (!(dot(dx, dx) < 0.0))
        throw std::invalid_argument("boundaryLimitCheck: dx must be spacelike");
    const double eps = 1e-12;
    const WeightFunction P = WeightFunction::power(spec.nu);
    const double c = boundaryConstant(spec.nu);
    BoundaryLimitReport rep;
    rep.limit = c * c * gff2pt(P, P, dx, spec.d, eps).value.real();
    const double Delta = spec.Delta();
    for (double z : z_sequence) {
        if (!(z > 0.0))
            throw std::invalid_argument("boundaryLimitCheck: z must be positive");
        const double v = ads2pt(spec, z, z, dx, eps).value.real() * std::pow(z, -2.0 * Delta);
        rep.rows.push_back({z, v, std::fabs(v - rep.limit) / std::fabs(rep.limit)});
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].z < rep.rows[i - 1].z && !(rep.rows[i].deviation < rep.rows[i - 1].deviation))
            rep.monotone = false;
    std::vector<double> lx, ly;
    for (auto& r : rep.rows)
        if (r.deviation > 0.0) {
            lx.push_back(std::log(r.z));
            ly.push_back(std::log(r.deviation));
        }
    if (lx.size() >= 2) {
        const double n = double(lx.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        rep.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return rep;
}

// ---------------------------------------------------------------- CCR

ZProfile ZProfile::gaussian(double z0, double width) {
    if (!(z0 > 0.0) || !(width > 0.0))
        throw std::invalid_argument("ZProfile::gaussian: need z0 > 0, width > 0");
    ZProfile p;
    p.g = [z0, width](double z) {
        const double t = (z - z0) / width;
        return std::exp(-0.5 * t * t);
    };
    p.lo = std::max(0.0, z0 - 10.0 * width);
    p.hi = z0 + 10.0 * width;
    p.label = "gaussian";
    return p;
}

ZProfile ZProfile::bump(double a, double b) {
    if (!(a >= 0.0) || !(b > a))
        throw std::invalid_argument("ZProfile::bump: need 0 <= a < b");
    ZProfile p;
    p.g = [a, b](double z) {
        const double u = (2.0 * z - a - b) / (b - a);
        if (std::fabs(u) >= 1.0)
            return 0.0;
        return std::exp(-1.0 / (1.0 - u * u));
    };
    p.lo = a;
    p.hi = b;
    p.label = "bump";
    return p;
}

ZProfile ZProfile::scaled(double lambda) const {
    if (!(lambda > 0.0))
        throw std::invalid_argument("ZProfile::scaled: lambda must be positive");
    ZProfile p;
    auto g0 = g;
    p.g = [g0, lambda](double z) { return g0(lambda * z); };
    p.lo = lo / lambda;
    p.hi = hi / lambda;
    p.label = label + " scaled";
    return p;
}

double ZProfile::integrationTop() const {
    if (!std::isfinite(hi))
        throw std::invalid_argument("ZProfile: support must be bounded");
    return hi;
}

double SpatialPacket::operator()(const std::vector<double>& x) const {
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = (x[i] - center[i]) / width;
        e += t * t;
    }
    return std::exp(-0.5 * e);
}

cplx SpatialPacket::fourier(const std::vector<double>& k) const {
    cplx v = 1.0;
    for (std::size_t i = 0; i < k.size(); ++i)
        v *= std::sqrt(2.0 * pi) * width * std::exp(cplx(-0.5 * width * width * k[i] * k[i], -k[i] * center[i]));
    return v;
}

namespace {
// int over the profile support of g(z) z^p J_nu(z m)
double profileTransform(const ZProfile& prof, double p, double nu, double m) {
    const double top = prof.integrationTop();
    auto f = [&](double z) { return z <= 0.0 ? 0.0 : prof.g(z) * std::pow(z, p) * besselJ(nu, z * m); };
    FiniteOptions fo;
    fo.abs_floor = 1e-16;
    return adaptiveFinite(RealFn(f), prof.lo, top, 1e-12, fo).value.real();
}
} // namespace

CCRReport ccrCheck(const AdSFieldSpec& spec, const ZProfile& g, const ZProfile& gp, const SpatialPacket& f,
                   const SpatialPacket& fp) {
    spec.validate();
    if (spec.d != 2)
        throw std::invalid_argument("ccrCheck: d = 2 only");
    if (f.center.size() != 1 || fp.center.size() != 1)
        throw std::invalid_argument("ccrCheck: spatial packets are one-dimensional for d = 2");
    const int d = spec.d;
    const double nu = spec.nu;
    // spatial factor from the mode sum: int dk/(2 pi) f~(k) fp~(-k)
    const double W = 9.0 / std::min(f.width, fp.width);
    std::vector<double> kx, kw;
    compositeGauss(-W, W, 24, 24, kx, kw);
    cplx spatial = 0.0;
    for (std::size_t i = 0; i < kx.size(); ++i)
        spatial += kw[i] * f.fourier({kx[i]}) * fp.fourier({-kx[i]});
    spatial /= 2.0 * pi;
    // mass factor int m dm G(m) Gp(m), panel by panel until the envelope dies
    const double ztop = std::max(g.integrationTop(), gp.integrationTop());
    const double L = 8.0 * pi / ztop;
    auto F = [&](double m) -> double {
        if (m <= 0.0)
            return 0.0;
        return m * profileTransform(g, 0.5 * d, nu, m) * profileTransform(gp, 1.0 - 0.5 * d, nu, m);
    };
    double mass = 0.0, err = 0.0, peak = 0.0;
    int quiet = 0;
    for (int j = 0; j < 4000; ++j) {
        FiniteOptions fo;
        fo.abs_floor = 1e-17 * std::max(peak, 1e-300);
        const auto r = adaptiveFinite(RealFn(F), j * L, (j + 1) * L, 1e-10, fo);
        mass += r.value.real();
        err += r.error_estimate;
        double env = 0.0;
        for (int s = 0; s <= 8; ++s) env = std::max(env, std::fabs(F(j * L + s * L / 8.0)));
        peak = std::max(peak, env * L);
        if (env * L <= 1e-14 * peak) {
            if (++quiet >= 3)
                break;
        } else {
            quiet = 0;
        }
    }
    CCRReport rep;
    rep.value = cplx(0.0, 1.0) * spatial * mass;
    rep.error_estimate = std::abs(spatial) * err;
    // reference i int g gp dz int f fp dx
    const double lo = std::max(g.lo, gp.lo), hi = std::min(g.integrationTop(), gp.integrationTop());
    double zz = 0.0;
    if (hi > lo)
        zz = adaptiveFinite(RealFn([&](double z) { return g.g(z) * gp.g(z); }), lo, hi, 1e-13).value.real();
    const double s1 = f.width * f.width, s2 = fp.width * fp.width;
    const double dc = f.center[0] - fp.center[0];
    const double xx = std::sqrt(2.0 * pi * s1 * s2 / (s1 + s2)) * std::exp(-0.5 * dc * dc / (s1 + s2));
    rep.reference = cplx(0.0, zz * xx);
    rep.discrepancy = std::abs(rep.value - rep.reference);
    return rep;
}

// ---------------------------------------------------------------- bonus locality

QuadratureResult bonusLocality(double mu, double nu, double a, double b, double c, const AbelSchedule& schedule,
                               const OscillatoryOptions& opt) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
        throw std::invalid_argument("bonusLocality: a, b, c must be positive");
    if (!(nu > -1.0))
        throw std::invalid_argument("bonusLocality: nu must exceed -1");
    auto f = [=](double u) -> cplx {
        if (u <= 0.0)
            return 0.0;
        return std::pow(u, 1.0 - mu) * besselJAnyOrder(mu, a * u) * besselJ(nu, b * u) * besselJ(nu, c * u);
    };
    return oscillatorySemiInfinite(f, schedule, opt);
}

double bonusLocalityHalfInteger(double a, double b, double c) {
    const double lo = std::fabs(b - c), hi = b + c;
    double v = 0.0;
    if (a > lo)
        v += 1.0 / std::sqrt(a * a - lo * lo);
    if (a > hi)
        v -= 1.0 / std::sqrt(a * a - hi * hi);
    return v / (pi * std::sqrt(b * c));
}

void checkGuardBand(double a, double b, double c, double band) {
    const double m2 = (b - c) * (b - c), p2 = (b + c) * (b + c);
    if (m2 > 0.0 && std::fabs(a * a - m2) < band * m2)
        throw LightConeProximity("inside the guard band around a^2 = (b-c)^2");
    if (std::fabs(a * a - p2) < band * p2)
        throw LightConeProximity("inside the guard band around a^2 = (b+c)^2");
}

Correlator adsCommutator(const AdSFieldSpec& spec, double z, double zp, const MinkVector& dx,
                         const CommutatorOptions& opt) {
    spec.validate();
    if (!(z > 0.0) || !(zp > 0.0))
        throw std::invalid_argument("adsCommutator: z, z' must be positive");
    const double s = dot(dx, dx);
    if (s > 0.0)
        checkGuardBand(std::sqrt(s), z, zp);
    const WeightFunction a = WeightFunction::besselZ(z, spec.nu, spec.d);
    const WeightFunction b = WeightFunction::besselZ(zp, spec.nu, spec.d);
    return gffCommutator(a, b, dx, spec.d, opt);
}

// ---------------------------------------------------------------- mass change

double dampedBesselProduct(double nu, double a, double b, double eps) {
    if (!(eps > 0.0) || !(a >= 0.0) || !(b >= 0.0))
        throw std::invalid_argument("dampedBesselProduct: need eps > 0, a, b >= 0");
    if (nu > -0.5) {
        // Laplace transform of the Gegenbauer-type product formula
        const double e2 = eps * eps + a * a + b * b, ab = 2.0 * a * b;
        auto w = [&](double den) { return eps / (den * std::sqrt(den)); };
        FiniteOptions fo;
        fo.abs_floor = 1e-300;
        const double t1 = adaptiveFinite(RealFn([&](double th) { return w(e2 - ab * std::cos(th)) * std::cos(nu * th); }),
                                         0.0, pi, 1e-12, fo).value.real() / pi;
        double t2 = 0.0;
        const double sn = std::sin(nu * pi);
        if (std::fabs(sn) > 1e-15) {
            const double smax = 40.0 / (nu + 1.5);
            t2 = adaptiveFinite(RealFn([&](double s) { return w(e2 + ab * std::cosh(s)) * std::exp(-nu * s); }), 0.0,
                                smax, 1e-12, fo).value.real();
        }
        return t1 - sn / pi * t2;
    }
    // direct damped integral
    const double top = 45.0 / eps;
    const double L = pi / std::max({a, b, 1.0});
    double s = 0.0;
    for (double x = 0.0; x < top; x += 16.0 * L)
        s += adaptiveFinite(RealFn([&](double t) {
                                return t * std::exp(-eps * t) * besselJAnyOrder(nu, a * t) * besselJAnyOrder(nu, b * t);
                            }),
                            x, std::min(top, x + 16.0 * L), 1e-12)
                 .value.real();
    return s;
}

MassChangeReport massChangeKernelCheck(double nu, double nup, double z, double m, int d,
                                       const AbelSchedule& schedule) {
    if (!(nu > -1.0) || !(nup > -1.0))
        throw std::invalid_argument("massChangeKernelCheck: orders must exceed -1");
    if (!(z > 0.0) || !(m > 0.0) || d < 2)
        throw std::invalid_argument("massChangeKernelCheck: need z, m > 0 and d >= 2");
    schedule.validate();
    MassChangeReport rep;
    rep.reference = std::pow(z, 0.5 * d) / std::numbers::sqrt2 * besselJ(nu, z * m);
    const double pre = std::pow(z, 0.5 * d) / std::numbers::sqrt2;
    AbelTable table;
    for (double eps : schedule.epsilons) {
        auto F = [&](double mp) -> cplx {
            if (mp <= 0.0)
                return 0.0;
            return mp * besselJ(nu, z * mp) * dampedBesselProduct(nup, mp, m, eps);
        };
        const double M = 2.0 * m + 20.0 / z;
        std::vector<double> pts{0.0};
        for (double p : {m - 20.0 * eps, m - 2.0 * eps, m, m + 2.0 * eps, m + 20.0 * eps})
            if (p > 0.0 && p < M) pts.push_back(p);
        pts.push_back(M);
        double v = 0.0, e = 0.0;
        FiniteOptions fo;
        fo.abs_floor = 1e-14;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const auto r = adaptiveFinite(F, pts[i], pts[i + 1], 1e-11, fo);
            v += r.value.real();
            e += r.error_estimate;
        }
        const auto tail = partitionedOscillatory([&](double u) { return F(M + u); }, pi / z, 40);
        v += tail.value.real();
        e += tail.error_estimate;
        table.epsilons.push_back(eps);
        table.values.push_back(pre * v);
        table.errors.push_back(pre * e);
        rep.epsilons.push_back(eps);
        rep.damped.push_back(pre * v);
    }
    const auto ex = extrapolateToZero(table, schedule.extrapolation_order, 0.5);
    rep.value = ex.value.real();
    rep.error_estimate = ex.error_estimate;
    rep.rel_error = std::fabs(rep.value - rep.reference) / std::fabs(rep.reference);
    return rep;
}

} // namespace gffads
