#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gffads {

// Extrapolation or summation that does not settle (non-Abel-summable input,
// singular weights whose square is not integrable).
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive budget exhausted; carries the best estimate reached so far.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::complex<double> best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
    std::complex<double> best_estimate;
    double error_estimate;
};

// Finite-difference grid too coarse for the requested stencil tolerance.
class ResolutionError : public std::runtime_error {
public:
    ResolutionError(const std::string& what, double estimate)
        : std::runtime_error(what), stencil_error(estimate) {}
    double stencil_error;
};

// Transformation leaves the Poincare chart (singular denominator or z <= 0).
class ChartExit : public std::runtime_error {
public:
    explicit ChartExit(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation too close to a light cone for the regularized limit to be trusted.
class LightConeProximity : public std::runtime_error {
public:
    explicit LightConeProximity(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gffads
