#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace losnlos {

/// Globally adaptive 10/21-point Gauss-Kronrod integration shared by the
/// analytic modules.
struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
};

struct QuadratureTolerance {
    double abs = 1e-10;
    double rel = 1e-10;
    int max_intervals = 4000;
};

/// Thrown when the requested tolerance cannot be met. Carries the interval
/// with the largest remaining error estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double worst_lo, double worst_hi, double worst_error);

    double worst_lo() const noexcept { return lo_; }
    double worst_hi() const noexcept { return hi_; }
    double worst_error() const noexcept { return err_; }

private:
    double lo_;
    double hi_;
    double err_;
};

using Integrand = std::function<double(double)>;

/// Integral of f over the finite interval [a, b].
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureTolerance& tol = {});

/// Integral of f over [a, +inf) for a > 0.
///
/// Works in the variable x = ln(u / a) on consecutive chunks whose widths
/// double, and stops once a chunk contributes less than the tolerance. Power
/// law and faster decay become exponential decay in x, so the truncation
/// point adapts to the integrand's own scale.
QuadratureResult integrate_tail(const Integrand& f, double a, const QuadratureTolerance& tol = {});

}  // namespace losnlos
