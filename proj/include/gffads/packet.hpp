#pragma once

#include <complex>
#include <vector>

#include "gffads/spacetime.hpp"

namespace gffads {

using cplx = std::complex<double>;

// coeff * prod_mu (x^mu)^powers[mu]
struct Monomial {
    cplx coeff{1.0, 0.0};
    std::vector<int> powers;
};

// Test function P(x) exp(-sum_mu (x^mu - c^mu)^2 / (2 s_mu^2)) exp(-i k0.x) with a
// polynomial P in the upper-index coordinates. Closed under derivatives and
// multiplication by coordinates, with exact Fourier transforms.
class TestFunction {
public:
    TestFunction() = default;
    TestFunction(MinkVector center, std::vector<double> widths, MinkVector carrier,
                 std::vector<Monomial> poly);

    // isotropic packet with P = 1
    static TestFunction gaussian(const MinkVector& center, double width, const MinkVector& carrier);
    static TestFunction gaussian(const MinkVector& center, std::vector<double> widths,
                                 const MinkVector& carrier);

    int dim() const { return center_.dim(); }
    const MinkVector& center() const { return center_; }
    const std::vector<double>& widths() const { return widths_; }
    const MinkVector& carrier() const { return carrier_; }
    const std::vector<Monomial>& poly() const { return poly_; }
    int degree() const;

    cplx operator()(const MinkVector& x) const;

    // int f(x) exp(+i k.x) d^dx   (k.x Minkowski)
    cplx fourierPlus(const MinkVector& k) const;
    // int f(x) exp(-i k.x) d^dx
    cplx fourierMinus(const MinkVector& k) const;

    // d/dx^mu
    TestFunction derivative(int mu) const;
    // multiplication by x^mu (upper index)
    TestFunction timesX(int mu) const;
    TestFunction scaled(cplx s) const;
    TestFunction conjugate() const;
    TestFunction translated(const MinkVector& a) const;

    // sum of two functions sharing the Gaussian and carrier
    TestFunction operator+(const TestFunction& o) const;
    TestFunction operator-(const TestFunction& o) const;

    // half-width per component of the momentum region where fourierPlus is
    // non-negligible, around +carrier (fourierMinus: around -carrier)
    double momentumHalfWidth(int mu, double cut = 8.5) const;

private:
    cplx fourierImpl(const MinkVector& k, double sign) const;
    void simplify();

    MinkVector center_;
    std::vector<double> widths_;
    MinkVector carrier_;
    std::vector<Monomial> poly_;
};

// Isotropic Gaussian smearing function with carrier k0.
struct GaussianPacket {
    MinkVector center;
    double width = 1.0;
    MinkVector carrier;

    void validate() const;
    TestFunction toTestFunction() const;
    operator TestFunction() const { return toTestFunction(); } // NOLINT
    // closed form exp(i(k-k0).c) (2 pi s^2)^{d/2} exp(-s^2 |k-k0|_E^2 / 2)
    cplx fourier(const MinkVector& k) const;
};

} // namespace gffads
