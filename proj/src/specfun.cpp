#include "gffads/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gffads {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = std::numbers::egamma;

bool isNonPositiveInteger(double x) {
    return x <= 0.0 && std::floor(x) == x;
}

bool isInteger(double x) { return std::floor(x) == x; }

} // namespace

double gamma(double x) {
    if (!std::isfinite(x))
        throw std::domain_error("gamma: non-finite argument");
    if (isNonPositiveInteger(x))
        throw std::domain_error("gamma: pole at " + std::to_string(x));
    return std::tgamma(x);
}

bool detail::besselJAsymptotic(double nu, double u, double& out) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double P = 1.0, Q = 0.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * u);
        const double mag = std::fabs(term);
        if (mag == 0.0) {
            break; // series terminates (half-integer order)
        }
        if (mag > last && k > 2)
            return false;
        last = mag;
        // signs: P = t0 - t2 + t4 ..., Q = t1 - t3 + ...
        const int r = k % 4;
        if (r == 0) P += term;
        else if (r == 1) Q += term;
        else if (r == 2) P -= term;
        else Q -= term;
        if (mag < 1e-17 * (std::fabs(P) + std::fabs(Q)))
            break;
    }
    const double chi = u - (0.5 * nu + 0.25) * pi;
    out = std::sqrt(2.0 / (pi * u)) * (P * std::cos(chi) - Q * std::sin(chi));
    return true;
}

namespace {

double besselJPos(double nu, double u) {
    if (u == 0.0)
        return nu == 0.0 ? 1.0 : 0.0;
    if (u >= 25.0 + nu * nu) {
        double v;
        if (detail::besselJAsymptotic(nu, u, v))
            return v;
    }
    return std::cyl_bessel_j(nu, u);
}

} // namespace

double besselY(double nu, double u) {
    if (u <= 0.0)
        throw std::domain_error("besselY: u must be positive");
    if (nu < 0.0) {
        const double a = -nu;
        return std::sin(a * pi) * besselJPos(a, u) + std::cos(a * pi) * std::cyl_neumann(a, u);
    }
    return std::cyl_neumann(nu, u);
}

double besselJ(double nu, double u) {
    if (u < 0.0)
        throw std::domain_error("besselJ: u must be non-negative");
    if (nu <= -1.0)
        throw std::domain_error("besselJ: order must exceed -1");
    if (nu >= 0.0)
        return besselJPos(nu, u);
    const double a = -nu;
    if (u == 0.0)
        return std::numeric_limits<double>::infinity();
    return std::cos(a * pi) * besselJPos(a, u) - std::sin(a * pi) * std::cyl_neumann(a, u);
}

double besselK(double nu, double u) {
    if (!(u > 0.0))
        throw std::domain_error("besselK: u must be positive");
    return std::cyl_bessel_k(std::fabs(nu), u);
}

double besselI(double nu, double u) {
    if (u < 0.0)
        throw std::domain_error("besselI: u must be non-negative");
    if (nu >= 0.0)
        return std::cyl_bessel_i(nu, u);
    const double a = -nu;
    if (u == 0.0)
        return isInteger(a) ? 0.0 : std::numeric_limits<double>::infinity();
    return std::cyl_bessel_i(a, u) + (2.0 / pi) * std::sin(a * pi) * std::cyl_bessel_k(a, u);
}

double jEven(double nu, double s) {
    if (nu <= -1.0)
        throw std::domain_error("jEven: order must exceed -1");
    if (s > 16.0) {
        const double u = std::sqrt(s);
        return besselJ(nu, u) / std::pow(u, nu);
    }
    // all terms share sign for s < 0, so the series is stable there
    double term = std::pow(2.0, -nu) / gamma(nu + 1.0);
    double sum = term;
    const double x = -0.25 * s;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (n * (nu + n));
        sum += term;
        if (!std::isfinite(sum))
            throw std::range_error("jEven: overflow at s = " + std::to_string(s));
        if (std::fabs(term) < 1e-17 * std::fabs(sum) && n > std::fabs(x))
            break;
    }
    return sum;
}

namespace {

void besselK01Series(cplx w, cplx& k0, cplx& k1) {
    const cplx y = 0.25 * w * w;
    const cplx lg = std::log(0.5 * w);
    cplx p = 1.0;          // y^k/(k!)^2
    cplx i0 = 0.0, s0 = 0.0;
    cplx q = 1.0;          // y^k/(k!(k+1)!)
    cplx i1 = 0.0, s1 = 0.0;
    double H = 0.0;        // harmonic number H_k
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            p *= y / double(k * k);
            q *= y / double(k * (k + 1));
            H += 1.0 / k;
        }
        i0 += p;
        s0 += p * H;
        i1 += q;
        const double psi1 = -euler_gamma + H;
        const double psi2 = psi1 + 1.0 / (k + 1);
        s1 += q * (psi1 + psi2);
        if (std::abs(p) < 1e-18 * std::abs(i0) && k > 2)
            break;
    }
    k0 = -(lg + euler_gamma) * i0 + s0;
    k1 = 1.0 / w + lg * (0.5 * w * i1) - 0.25 * w * s1;
}

// Temme's continued fraction CF2, returns K_mu and K_{mu+1} for |mu| <= 1/2.
void besselKCF2(double xmu, cplx x, cplx& kmu, cplx& kmu1) {
    cplx b = 2.0 * (1.0 + x);
    cplx d = 1.0 / b;
    cplx h = d, delh = d;
    cplx q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - xmu * xmu;
    cplx q = a1, c = a1;
    double a = -a1;
    cplx s = 1.0 + q * delh;
    int i = 2;
    for (; i < 200000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / double(i);
        const cplx qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cplx dels = q * delh;
        s += dels;
        if (std::abs(dels) < 1e-17 * std::abs(s))
            break;
    }
    if (i >= 200000)
        throw std::runtime_error("besselKc: continued fraction did not converge");
    h = a1 * h;
    kmu = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
    kmu1 = kmu * (xmu + x + 0.5 - h) / x;
}

} // namespace

cplx besselKc(double nu, cplx w) {
    if (!(w.real() > 0.0) && !(w.real() == 0.0 && w.imag() != 0.0))
        throw std::domain_error("besselKc: need Re w > 0");
    const double a = std::fabs(nu);
    const double twice = 2.0 * a;
    if (std::floor(twice) != twice)
        throw std::domain_error("besselKc: order must be an integer or half-integer");
    const int n = static_cast<int>(std::floor(a));
    cplx k0, k1;
    double base;
    if (isInteger(a)) {
        base = 0.0;
        if (std::abs(w) <= 2.0)
            besselK01Series(w, k0, k1);
        else
            besselKCF2(0.0, w, k0, k1);
    } else {
        base = 0.5;
        k0 = std::sqrt(pi / (2.0 * w)) * std::exp(-w);
        k1 = k0 * (1.0 + 1.0 / w);
    }
    if (n == 0)
        return k0;
    for (int j = 1; j < n; ++j) {
        const cplx k2 = k0 + (2.0 * (base + j) / w) * k1;
        k0 = k1;
        k1 = k2;
    }
    return k1;
}

} // namespace gffads
