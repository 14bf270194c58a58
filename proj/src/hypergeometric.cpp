#include "losnlos/hypergeometric.hpp"

#include "losnlos/quadrature.hpp"
#include "losnlos/units.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace losnlos {

namespace {

constexpr int kMaxTerms = 100000;
constexpr double kSeriesEps = 1e-17;

/// sum_n b/(b+n) z^n, |z| <= 0.5.
double direct_series(double b, double z)
{
    double sum = 1.0;
    double power = 1.0;
    for (int n = 1; n < kMaxTerms; ++n) {
        power *= z;
        const double term = b / (b + n) * power;
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum)) {
            return sum;
        }
    }
    throw std::runtime_error("hyp2f1: direct series did not converge");
}

/// 2F1(1, 1; b + 1; w) = sum_n n! / (b+1)_n w^n, 0 <= w <= 2/3.
double pfaff_series(double b, double w)
{
    double sum = 1.0;
    double term = 1.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        term *= (n + 1.0) / (b + 1.0 + n) * w;
        sum += term;
        if (std::abs(term) <= kSeriesEps * std::abs(sum)) {
            return sum;
        }
    }
    throw std::runtime_error("hyp2f1: transformed series did not converge");
}

/// F = int_0^1 dv / (1 + x v^(1/b)), x = -z. Smooth after s = v^(1/b).
double by_quadrature(double b, double z)
{
    const double x = -z;
    const auto g = [=](double v) { return 1.0 / (1.0 + x * std::pow(v, 1.0 / b)); };
    return integrate(g, 0.0, 1.0, {0.0, 1e-14, 20000}).value;
}

bool near_integer(double b, double margin)
{
    return std::abs(b - std::round(b)) < margin;
}

}  // namespace

double hyp2f1_unit(double b, double z)
{
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::domain_error("hyp2f1: b must be positive");
    }
    if (!(z <= 0.0) || std::isinf(z)) {
        throw std::domain_error("hyp2f1: z must be finite and non-positive");
    }
    if (z >= -0.5) {
        return direct_series(b, z);
    }
    if (z >= -2.0) {
        return pfaff_series(b, z / (z - 1.0)) / (1.0 - z);
    }
    // Large |z|: expand around infinity. The two terms cancel as b nears an
    // integer, so fall back to the defining integral there.
    if (near_integer(b, 1e-3)) {
        return by_quadrature(b, z);
    }
    const double x = -z;
    const double lead = kPi * b / std::sin(kPi * b) * std::pow(x, -b);
    return lead + b / (b - 1.0) / x * direct_series(1.0 - b, 1.0 / z);
}

double hyp2f1(double a, double b, double c, double z)
{
    if (a != 1.0 || std::abs(c - (b + 1.0)) > 1e-14 * std::max(1.0, std::abs(c))) {
        throw std::domain_error("hyp2f1: only a = 1, c = b + 1 is supported");
    }
    return hyp2f1_unit(b, z);
}

double rho1(double alpha, double beta, double t, double d)
{
    if (!(alpha > 0.0) || !(beta >= 0.0) || !(t >= 0.0) || !(d >= 0.0)) {
        throw std::domain_error("rho1: need alpha > 0, beta >= 0, t >= 0, d >= 0");
    }
    if (d == 0.0) {
        return 0.0;
    }
    const double lead = std::pow(d, beta + 1.0) / (beta + 1.0);
    if (t == 0.0) {
        return lead;
    }
    return lead * hyp2f1_unit((beta + 1.0) / alpha, -t * std::pow(d, alpha));
}

double rho2(double alpha, double beta, double t, double d)
{
    if (!(alpha > beta + 1.0)) {
        throw std::domain_error("rho2: tail integral diverges unless alpha > beta + 1");
    }
    if (!(beta >= 0.0) || !(t > 0.0) || !(d > 0.0)) {
        throw std::domain_error("rho2: need beta >= 0, t > 0, d > 0");
    }
    const double k = alpha - beta - 1.0;
    const double lead = std::pow(d, -k) / (t * k);
    return lead * hyp2f1_unit(k / alpha, -1.0 / (t * std::pow(d, alpha)));
}

}  // namespace losnlos
