#pragma once

#include <complex>

namespace gffads {

using cplx = std::complex<double>;

// Gamma function; throws std::domain_error at the poles 0, -1, -2, ...
double gamma(double x);

// Bessel J_nu(u) for nu > -1, u >= 0.
double besselJ(double nu, double u);

// Bessel Y_nu(u), u > 0 (used for negative-order reflection only).
double besselY(double nu, double u);

// Modified Bessel K_nu(u), u > 0. K_{-nu} = K_nu.
double besselK(double nu, double u);

// Modified Bessel I_nu(u), u >= 0, nu > -1.
double besselI(double nu, double u);

// Even entire function j_nu(s) with u^nu j_nu(u^2) = J_nu(u) and
// j_nu(-u^2) = u^-nu I_nu(u). Throws std::range_error on overflow.
double jEven(double nu, double s);

// K_nu(w) for complex w with Re w > 0 and nu an integer or half-integer
// (the orders (d-2)/2 met by Wightman functions).
cplx besselKc(double nu, cplx w);

namespace detail {
// Hankel large-argument expansion of J_nu; returns false if it did not reach
// double precision before the terms started growing.
bool besselJAsymptotic(double nu, double u, double& out);
} // namespace detail

} // namespace gffads
