#include "gffads/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gffads/errors.hpp"
#include "gffads/specfun.hpp"

namespace gffads {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

double lsSlope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

// log-log slope of |y| over nodes [i0, i1)
double growthOver(const std::vector<double>& x, const std::vector<double>& y, std::size_t i0,
                  std::size_t i1) {
    std::vector<double> lx, ly;
    for (std::size_t i = i0; i < i1; ++i)
        if (x[i] > 0.0 && y[i] != 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(std::fabs(y[i])));
        }
    return lx.size() < 2 ? 0.0 : lsSlope(lx, ly);
}

void checkDim(const MinkVector& x, int d) {
    if (d < 2 || x.dim() != d)
        throw std::invalid_argument("dimension mismatch between point and d");
}

double reSqrtSigma(const MinkVector& x, double eps) {
    double r2 = 0.0;
    for (int i = 1; i < x.dim(); ++i) r2 += x[i] * x[i];
    const cplx t(x[0], -eps);
    return std::sqrt(cplx(r2, 0.0) - t * t).real();
}
} // namespace

// ---------------------------------------------------------------- weights

WeightFunction WeightFunction::one() {
    WeightFunction w;
    w.kind_ = Kind::One;
    return w;
}

WeightFunction WeightFunction::polynomial(std::vector<double> coeffs) {
    WeightFunction w;
    w.kind_ = Kind::Polynomial;
    w.coeffs_ = std::move(coeffs);
    return w;
}

WeightFunction WeightFunction::power(double nu) {
    if (!(nu > -1.0))
        throw std::invalid_argument("Power weight needs nu > -1");
    WeightFunction w;
    w.kind_ = Kind::Power;
    w.nu_ = nu;
    return w;
}

WeightFunction WeightFunction::besselZ(double z, double nu, int d) {
    if (!(z > 0.0))
        throw std::invalid_argument("BesselZ weight needs z > 0");
    if (!(nu > -1.0))
        throw std::invalid_argument("BesselZ weight needs nu > -1");
    if (d < 2)
        throw std::invalid_argument("BesselZ weight needs d >= 2");
    WeightFunction w;
    w.kind_ = Kind::BesselZ;
    w.z_ = z;
    w.nu_ = nu;
    w.d_ = d;
    return w;
}

WeightFunction WeightFunction::tabulated(std::vector<double> m2, std::vector<double> h) {
    if (m2.size() != h.size() || m2.size() < 2)
        throw std::invalid_argument("tabulated weight needs >= 2 matching nodes");
    for (std::size_t i = 0; i < m2.size(); ++i) {
        if (!std::isfinite(m2[i]) || !std::isfinite(h[i]))
            throw std::invalid_argument("tabulated weight: non-finite entry");
        if (m2[i] < 0.0)
            throw std::invalid_argument("tabulated weight: negative m^2 node");
        if (i > 0 && !(m2[i] > m2[i - 1]))
            throw std::invalid_argument("tabulated weight: nodes must increase");
    }
    WeightFunction w;
    w.kind_ = Kind::Tabulated;
    // growth fit on the last two quarters; exponential growth shows up as a
    // slope that keeps climbing
    const std::size_t n = m2.size();
    if (n >= 8) {
        const double g3 = growthOver(m2, h, n / 2, 3 * n / 4);
        const double g4 = growthOver(m2, h, 3 * n / 4, n);
        w.growth_ = g4;
        if (g4 > 10.0 && g4 > 1.5 * std::max(g3, 1.0))
            throw std::invalid_argument("tabulated weight grows faster than a polynomial");
    }
    w.xs_ = std::make_shared<const std::vector<double>>(std::move(m2));
    w.ys_ = std::make_shared<const std::vector<double>>(std::move(h));
    return w;
}

WeightFunction WeightFunction::tabulatedFromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open weight table " + path);
    std::vector<double> xs, ys;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto p = line.find('#'); p != std::string::npos)
            line.erase(p);
        std::istringstream ss(line);
        double a, b;
        if (!(ss >> a))
            continue;
        if (!(ss >> b))
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected two columns");
        std::string rest;
        if (ss >> rest)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": trailing data");
        xs.push_back(a);
        ys.push_back(b);
    }
    return tabulated(std::move(xs), std::move(ys));
}

WeightFunction WeightFunction::custom(std::function<double(double)> fn, std::string label, double lo,
                                      double hi) {
    if (!fn)
        throw std::invalid_argument("custom weight needs a function");
    if (!(lo >= 0.0) || !(hi > lo))
        throw std::invalid_argument("custom weight: bad support");
    WeightFunction w;
    w.kind_ = Kind::Custom;
    w.fn_ = std::move(fn);
    w.label_ = std::move(label);
    w.lo_ = lo;
    w.hi_ = hi;
    return w;
}

double WeightFunction::base(double m2) const {
    switch (kind_) {
    case Kind::One: return 1.0;
    case Kind::Polynomial: {
        double s = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) s = s * m2 + *it;
        return s;
    }
    case Kind::Power: return std::pow(m2, 0.5 * nu_);
    case Kind::BesselZ:
        return std::pow(z_, 0.5 * d_) / std::numbers::sqrt2 * besselJ(nu_, z_ * std::sqrt(m2));
    case Kind::Tabulated: {
        const auto& x = *xs_;
        const auto& y = *ys_;
        if (m2 < x.front() || m2 > x.back())
            return 0.0;
        auto it = std::upper_bound(x.begin(), x.end(), m2);
        if (it == x.end())
            return y.back();
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        const double t = (m2 - x[i - 1]) / (x[i] - x[i - 1]);
        return y[i - 1] + t * (y[i] - y[i - 1]);
    }
    case Kind::Custom: return fn_(m2);
    }
    return 0.0;
}

double WeightFunction::operator()(double m2) const {
    if (m2 < 0.0)
        throw std::domain_error("weight evaluated at negative m^2");
    return pre_ * base(scale_ * m2);
}

std::string WeightFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::One: os << "One"; break;
    case Kind::Polynomial: os << "Polynomial(" << coeffs_.size() << " coeffs)"; break;
    case Kind::Power: os << "Power(nu=" << nu_ << ")"; break;
    case Kind::BesselZ: os << "BesselZ(z=" << z_ << ", nu=" << nu_ << ", d=" << d_ << ")"; break;
    case Kind::Tabulated: os << "Tabulated(" << xs_->size() << " nodes)"; break;
    case Kind::Custom: os << "Custom(" << label_ << ")"; break;
    }
    if (pre_ != 1.0 || scale_ != 1.0)
        os << " scaled[pre=" << pre_ << ", arg=" << scale_ << "]";
    return os.str();
}

WeightFunction WeightFunction::scaled(double lambda, int d) const {
    if (!(lambda > 0.0))
        throw std::invalid_argument("scaled: lambda must be positive");
    if (kind_ == Kind::BesselZ && d == d_ && pre_ == 1.0 && scale_ == 1.0)
        return besselZ(lambda * z_, nu_, d_);
    WeightFunction w = *this;
    w.pre_ *= std::pow(lambda, 0.5 * d);
    w.scale_ *= lambda * lambda;
    return w;
}

std::pair<double, double> WeightFunction::support() const {
    switch (kind_) {
    case Kind::Tabulated: return {xs_->front() / scale_, xs_->back() / scale_};
    case Kind::Custom: return {lo_ / scale_, hi_ / scale_};
    default: return {0.0, inf};
    }
}

std::vector<double> WeightFunction::breakpoints() const {
    std::vector<double> out;
    if (kind_ == Kind::Tabulated)
        for (double x : *xs_) out.push_back(x / scale_);
    return out;
}

bool WeightFunction::isZero() const {
    if (pre_ == 0.0)
        return true;
    if (kind_ == Kind::Polynomial)
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
    if (kind_ == Kind::Tabulated)
        return std::all_of(ys_->begin(), ys_->end(), [](double c) { return c == 0.0; });
    return false;
}

MassWeight MassWeight::lebesgue() {
    MassWeight w;
    w.density = [](double) { return 1.0; };
    w.label = "dm^2";
    return w;
}

MassWeight MassWeight::power(double nu) {
    if (!(nu > -1.0))
        throw std::invalid_argument("MassWeight::power needs nu > -1");
    MassWeight w;
    w.density = [nu](double m2) { return std::pow(m2, nu); };
    w.label = "m^{2nu} dm^2";
    return w;
}

MassWeight MassWeight::threshold(double M2) {
    if (!(M2 >= 0.0))
        throw std::invalid_argument("MassWeight::threshold needs M^2 >= 0");
    MassWeight w;
    w.density = [M2](double m2) { return 1.0 / std::sqrt(m2 - M2); };
    w.lo = M2;
    w.sqrt_threshold = true;
    w.label = "dm^2/sqrt(m^2-M^2)";
    return w;
}

MassWeight MassWeight::fromWeight(const WeightFunction& h) {
    MassWeight w;
    w.density = [h](double m2) {
        const double v = h(m2);
        return v * v;
    };
    std::tie(w.lo, w.hi) = h.support();
    w.label = "h^2 dm^2, h = " + h.describe();
    return w;
}

void MassWeight::validate() const {
    if (!density)
        throw std::invalid_argument("MassWeight: missing density");
    if (!(lo >= 0.0) || !(hi > lo))
        throw std::invalid_argument("MassWeight: bad support");
    for (auto& [m2, wt] : point_masses)
        if (!(m2 >= 0.0) || !(wt >= 0.0))
            throw std::invalid_argument("MassWeight: point masses need m^2 >= 0 and weight >= 0");
    // positivity spot check
    const double top = std::isfinite(hi) ? hi : lo + 100.0;
    for (int i = 1; i < 16; ++i) {
        const double m2 = lo + (top - lo) * i / 16.0;
        if (density(m2) < 0.0)
            throw std::invalid_argument("MassWeight: negative density");
    }
}

// ---------------------------------------------------------------- KG functions

Correlator wightmanKG(double m, const MinkVector& x, int d, double eps) {
    checkDim(x, d);
    if (!(m > 0.0))
        throw std::invalid_argument("wightmanKG: m must be positive");
    if (!(eps > 0.0))
        throw std::invalid_argument("wightmanKG: eps must be positive (light-cone branch)");
    double r2 = 0.0;
    for (int i = 1; i < d; ++i) r2 += x[i] * x[i];
    const cplx sigma(r2 - x[0] * x[0] + eps * eps, 2.0 * x[0] * eps);
    const double n = 0.5 * (d - 2);
    const double norm = std::pow(2.0 * pi, -0.5 * d);
    cplx value;
    if (sigma.imag() == 0.0 && sigma.real() > 0.0) {
        const double s = std::sqrt(sigma.real());
        value = norm * std::pow(m / s, n) * besselK(n, m * s);
    } else {
        const cplx s = std::sqrt(sigma);
        value = norm * std::pow(m / s, n) * besselKc(n, m * s);
    }
    return {value, 1e-14 * std::abs(value)};
}

double besselJAnyOrder(double nu, double u) {
    if (nu > -1.0)
        return besselJ(nu, u);
    const double a = -nu;
    if (a == std::round(a)) {
        const double j = besselJ(a, u);
        return (static_cast<long>(a) % 2 == 0) ? j : -j;
    }
    return std::cos(a * pi) * besselJ(a, u) - std::sin(a * pi) * besselY(a, u);
}

Correlator commutatorKG(double m, const MinkVector& x, int d) {
    checkDim(x, d);
    if (!(m > 0.0))
        throw std::invalid_argument("commutatorKG: m must be positive");
    const double s = dot(x, x);
    const double e2 = x.euclideanNorm2();
    if (e2 == 0.0 || std::fabs(s) <= 1e-10 * e2)
        throw LightConeProximity("commutatorKG: point on the light cone");
    if (s < 0.0)
        return {0.0, 0.0};
    const double tau = std::sqrt(s);
    const double n = 0.5 * (d - 2);
    const double mag = pi * std::pow(2.0 * pi, -0.5 * d) * std::pow(m / tau, n) *
                       besselJAnyOrder(-n, m * tau);
    const double sgn = x[0] > 0.0 ? 1.0 : -1.0;
    const cplx value(0.0, -mag * sgn);
    return {value, 1e-13 * std::abs(value)};
}

// ---------------------------------------------------------------- superpositions

namespace {
std::pair<double, double> jointSupport(const WeightFunction& a, const WeightFunction& b) {
    auto [l1, h1] = a.support();
    auto [l2, h2] = b.support();
    return {std::max(l1, l2), std::min(h1, h2)};
}

std::vector<double> splitPoints(double a, double b, const std::vector<double>& extra) {
    std::vector<double> pts{a};
    for (double p : extra)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

QuadratureResult integratePieces(const CplxFn& f, const std::vector<double>& pts, double tol,
                                 double floor) {
    QuadratureResult total;
    FiniteOptions fo;
    fo.abs_floor = floor;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto r = adaptiveFinite(f, pts[i], pts[i + 1], tol, fo);
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    return total;
}
} // namespace

Correlator gff2pt(const WeightFunction& h1, const WeightFunction& h2, const MinkVector& x, int d,
                  double eps, double cutoff, const MassIntegralOptions& opt) {
    checkDim(x, d);
    if (!(eps > 0.0))
        throw std::invalid_argument("gff2pt: eps must be positive");
    if (h1.isZero() || h2.isZero())
        return {0.0, 0.0};
    auto [lo, hi] = jointSupport(h1, h2);
    if (!(hi > lo))
        return {0.0, 0.0};
    const double R = reSqrtSigma(x, eps);
    const double mAuto = 40.0 / R;
    const double mTop = std::min(std::sqrt(hi), cutoff > 0.0 ? std::sqrt(cutoff) : mAuto);
    const double mLo = std::sqrt(lo);
    if (!(mTop > mLo))
        return {0.0, 0.0};
    auto F = [&](double m) -> cplx {
        if (m <= 0.0)
            return 0.0;
        const double m2 = m * m;
        return 2.0 * m * h1(m2) * h2(m2) * wightmanKG(m, x, d, eps).value;
    };
    std::vector<double> bp;
    for (double b : h1.breakpoints()) bp.push_back(std::sqrt(b));
    for (double b : h2.breakpoints()) bp.push_back(std::sqrt(b));
    auto r = integratePieces(F, splitPoints(mLo, mTop, bp), opt.rel_tol, opt.abs_floor);
    double tail = 0.0;
    if (mTop < std::sqrt(hi))
        tail = std::abs(F(mTop)) / R;
    return {r.value, r.error_estimate + tail};
}

Correlator kallenLehmann2pt(const MassWeight& rho, const MinkVector& x, int d, double eps,
                            double cutoff, const MassIntegralOptions& opt) {
    checkDim(x, d);
    rho.validate();
    if (!(eps > 0.0))
        throw std::invalid_argument("kallenLehmann2pt: eps must be positive");
    const double R = reSqrtSigma(x, eps);
    const double sAuto = (40.0 / R) * (40.0 / R);
    const double top = std::min(rho.hi, cutoff > 0.0 ? cutoff : sAuto);
    cplx value = 0.0;
    double err = 0.0;
    for (auto& [m2, wt] : rho.point_masses)
        if (m2 > 0.0) value += wt * wightmanKG(std::sqrt(m2), x, d, eps).value;
    if (top > rho.lo) {
        QuadratureResult r;
        FiniteOptions fo;
        fo.abs_floor = opt.abs_floor;
        if (rho.sqrt_threshold) {
            // m^2 = lo + t^2
            auto F = [&](double t) -> cplx {
                const double m2 = rho.lo + t * t;
                if (m2 <= 0.0 || t <= 0.0)
                    return 0.0;
                return 2.0 * t * rho.density(m2) * wightmanKG(std::sqrt(m2), x, d, eps).value;
            };
            r = adaptiveFinite(F, 0.0, std::sqrt(top - rho.lo), opt.rel_tol, fo);
        } else {
            auto F = [&](double m2) -> cplx {
                if (m2 <= 0.0)
                    return 0.0;
                return rho.density(m2) * wightmanKG(std::sqrt(m2), x, d, eps).value;
            };
            r = adaptiveFinite(F, rho.lo, top, opt.rel_tol, fo);
        }
        value += r.value;
        err += r.error_estimate;
        if (top < rho.hi) {
            const double mt = std::sqrt(top);
            err += std::abs(rho.density(top) * wightmanKG(mt, x, d, eps).value) * 2.0 * mt / R;
        }
    }
    return {value, err};
}

Correlator gffCommutator(const WeightFunction& h1, const WeightFunction& h2, const MinkVector& x,
                         int d, const CommutatorOptions& opt) {
    checkDim(x, d);
    const double s = dot(x, x);
    const double e2 = x.euclideanNorm2();
    if (e2 == 0.0 || std::fabs(s) <= 1e-10 * e2)
        throw LightConeProximity("gffCommutator: point on the light cone");
    if (s < 0.0 || h1.isZero() || h2.isZero())
        return {0.0, 0.0};
    auto [lo, hi] = jointSupport(h1, h2);
    if (!(hi > lo))
        return {0.0, 0.0};
    auto F = [&](double m) -> cplx {
        if (m <= 0.0 || m * m < lo || m * m > hi)
            return 0.0;
        const double m2 = m * m;
        return 2.0 * m * h1(m2) * h2(m2) * commutatorKG(m, x, d).value;
    };
    const double mLo = std::sqrt(lo);
    double mTop = std::sqrt(hi);
    if (opt.cutoff)
        mTop = std::min(mTop, std::sqrt(*opt.cutoff));
    if (std::isfinite(mTop)) {
        if (!(mTop > mLo))
            return {0.0, 0.0};
        std::vector<double> bp;
        for (double b : h1.breakpoints()) bp.push_back(std::sqrt(b));
        for (double b : h2.breakpoints()) bp.push_back(std::sqrt(b));
        auto r = integratePieces(F, splitPoints(mLo, mTop, bp), opt.rel_tol, 1e-14);
        return {r.value, r.error_estimate};
    }
    auto r = oscillatorySemiInfinite(F, opt.schedule, opt.oscillatory);
    return {r.value, r.error_estimate};
}

// ---------------------------------------------------------------- smeared

namespace {
struct Window {
    double lo, hi;
    bool clipped;
};

// lightcone window of conj(f1^) f2^ along k_plus (sign = +1) or k_minus (-1)
Window lightconeWindow(const TestFunction& f1, const TestFunction& f2, double sign, double cut) {
    const int deg = f1.degree() + f2.degree();
    double c[2], w[2];
    for (int mu = 0; mu < 2; ++mu) {
        const double a = f1.widths()[mu] * f1.widths()[mu];
        const double b = f2.widths()[mu] * f2.widths()[mu];
        c[mu] = (a * f1.carrier()[mu] + b * f2.carrier()[mu]) / (a + b);
        // the product Gaussian, but never narrower than the wider factor allows
        // when the carriers disagree
        const double sep = std::fabs(f1.carrier()[mu] - f2.carrier()[mu]);
        w[mu] = (cut + std::sqrt(double(deg))) / std::sqrt(a + b) + 0.5 * sep;
    }
    const double mid = c[0] + sign * c[1];
    const double half = w[0] + w[1];
    Window win{mid - half, mid + half, false};
    if (win.lo <= 0.0) {
        win.lo = 0.0;
        win.clipped = true;
    }
    return win;
}

// nodes/weights on a window; a window clipped at the cone edge is mapped
// by k = u^2 to soften power-law behaviour of h at k = 0
void windowRule(const Window& w, int panels, int order, std::vector<double>& k,
                std::vector<double>& wt) {
    k.clear();
    wt.clear();
    if (!(w.hi > w.lo))
        return;
    if (w.clipped) {
        std::vector<double> u, uw;
        compositeGauss(0.0, std::sqrt(w.hi), panels, order, u, uw);
        for (std::size_t i = 0; i < u.size(); ++i) {
            k.push_back(u[i] * u[i]);
            wt.push_back(2.0 * u[i] * uw[i]);
        }
    } else {
        compositeGauss(w.lo, w.hi, panels, order, k, wt);
    }
}

cplx smearedSum(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                const TestFunction& f2, const Window& wp, const Window& wm, int panels, int order) {
    std::vector<double> kp, wpw, km, wmw;
    windowRule(wp, panels, order, kp, wpw);
    windowRule(wm, panels, order, km, wmw);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < kp.size(); ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < km.size(); ++j) {
            const MinkVector k{0.5 * (kp[i] + km[j]), 0.5 * (kp[i] - km[j])};
            const double m2 = kp[i] * km[j];
            const double hh = h1(m2) * h2(m2);
            if (hh == 0.0)
                continue;
            row += wmw[j] * hh * std::conj(f1.fourierPlus(k)) * f2.fourierPlus(k);
        }
        sum += wpw[i] * row;
    }
    return 0.5 * sum / (2.0 * pi);
}
} // namespace

Correlator smeared2pt(const WeightFunction& h1, const TestFunction& f1, const WeightFunction& h2,
                      const TestFunction& f2, int d, const SmearingGrid& grid) {
    if (d != 2)
        throw std::invalid_argument("smeared2pt is implemented for d = 2");
    if (f1.dim() != 2 || f2.dim() != 2)
        throw std::invalid_argument("smeared2pt: packets must be two-dimensional");
    if (grid.panels < 2 || grid.order < 2)
        throw std::invalid_argument("smeared2pt: grid too small");
    if (h1.isZero() || h2.isZero())
        return {0.0, 0.0};
    const Window wp = lightconeWindow(f1, f2, 1.0, grid.cut);
    const Window wm = lightconeWindow(f1, f2, -1.0, grid.cut);
    if (!(wp.hi > 0.0) || !(wm.hi > 0.0))
        return {0.0, 0.0};
    const cplx fine = smearedSum(h1, f1, h2, f2, wp, wm, grid.panels, grid.order);
    const cplx coarse = smearedSum(h1, f1, h2, f2, wp, wm, (grid.panels + 1) / 2, grid.order);
    return {fine, std::abs(fine - coarse) + 1e-15 * std::abs(fine)};
}

// ---------------------------------------------------------------- Wick square

PairWeight PairWeight::product(const WeightFunction& a, const WeightFunction& b) {
    PairWeight p;
    p.h = [a, b](double x, double y) { return 0.5 * (a(x) * b(y) + a(y) * b(x)); };
    auto [l1, u1] = a.support();
    auto [l2, u2] = b.support();
    p.support = {std::min(l1, l2), std::max(u1, u2)};
    return p;
}

PairWeight PairWeight::zero() {
    PairWeight p;
    p.h = [](double, double) { return 0.0; };
    p.support = {0.0, 0.0};
    return p;
}

Correlator wick2pt(const PairWeight& h, const MinkVector& x, int d, double eps, double cutoff,
                   const MassIntegralOptions& opt) {
    checkDim(x, d);
    if (h.diagonal_delta)
        throw DivergenceError("wick2pt: delta(m1^2 - m2^2) weight is not square integrable; "
                              "the fluctuation diverges as the mollifier width goes to zero");
    if (!h.h)
        throw std::invalid_argument("wick2pt: missing weight");
    if (!(eps > 0.0))
        throw std::invalid_argument("wick2pt: eps must be positive");
    auto [lo, hi] = h.support;
    if (!(hi > lo))
        return {0.0, 0.0};
    const double R = reSqrtSigma(x, eps);
    const double mTop = std::min(std::sqrt(hi), cutoff > 0.0 ? std::sqrt(cutoff) : 40.0 / R);
    const double mLo = std::sqrt(lo);
    if (!(mTop > mLo))
        return {0.0, 0.0};
    FiniteOptions fo;
    fo.abs_floor = opt.abs_floor;
    double innerErr = 0.0;
    auto outer = [&](double m1) -> cplx {
        if (m1 <= 0.0)
            return 0.0;
        const cplx w1 = wightmanKG(m1, x, d, eps).value;
        auto inner = [&](double m2) -> cplx {
            if (m2 <= 0.0)
                return 0.0;
            const double v = h.h(m1 * m1, m2 * m2);
            if (v == 0.0)
                return 0.0;
            return 2.0 * m2 * v * v * wightmanKG(m2, x, d, eps).value;
        };
        auto r = adaptiveFinite(inner, mLo, mTop, 0.1 * opt.rel_tol, fo);
        innerErr = std::max(innerErr, r.error_estimate * std::abs(2.0 * m1 * w1));
        return 2.0 * 2.0 * m1 * w1 * r.value;
    };
    auto r = adaptiveFinite(outer, mLo, mTop, opt.rel_tol, fo);
    double tail = 0.0;
    if (mTop < std::sqrt(hi))
        tail = 2.0 * std::abs(outer(mTop)) / R;
    return {r.value, r.error_estimate + innerErr * (mTop - mLo) + tail};
}

// ---------------------------------------------------------------- scaling

ScalingReport scalingCovarianceCheck(const WeightFunction& h, double lambda, const MinkVector& x,
                                     int d, double eps) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("scalingCovarianceCheck: lambda must be positive");
    const WeightFunction hl = h.scaled(lambda, d);
    const MinkVector lx = x * lambda;
    const Correlator a = gff2pt(hl, hl, lx, d, lambda * eps);
    const Correlator b = gff2pt(h, h, x, d, eps);
    const Correlator c = gff2pt(h, h, lx, d, lambda * eps);
    ScalingReport rep;
    rep.scaled_side = a.value;
    rep.original = b.value;
    rep.direct = c.value;
    if (h.kind() == WeightFunction::Kind::Power && h.prefactor() == 1.0 && h.argumentScale() == 1.0) {
        const double Delta = 0.5 * d + h.nu();
        rep.power_prediction = std::pow(lambda, -2.0 * Delta) * b.value;
    }
    rep.discrepancy = std::abs(a.value - b.value);
    rep.tolerance = std::max(10.0 * (a.error_estimate + b.error_estimate), 1e-9 * std::abs(b.value));
    rep.pass = rep.discrepancy <= rep.tolerance;
    if (rep.power_prediction) {
        const double pd = std::abs(*rep.power_prediction - c.value);
        const double ptol = std::max(10.0 * (b.error_estimate + c.error_estimate), 1e-9 * std::abs(c.value));
        rep.pass = rep.pass && pd <= ptol;
    }
    return rep;
}

} // namespace gffads
