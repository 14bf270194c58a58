#include "losnlos/ase.hpp"

#include "losnlos/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace losnlos {

AsePoint ase(const CoverageFn& p_cov, double lambda, double gamma0, Method method, const AseTolerance& tol)
{
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("ase: lambda must be positive");
    }
    if (!(gamma0 > 0.0)) {
        throw std::invalid_argument("ase: gamma0 must be positive");
    }
    const double p0 = p_cov(gamma0);
    const auto g = [&](double gamma) { return p_cov(gamma) / (1.0 + gamma); };
    const auto tail = integrate_tail(g, gamma0, {tol.abs, tol.rel});
    const double value = lambda * (std::log2(1.0 + gamma0) * p0 + tail.value / std::numbers::ln2);
    return {lambda, gamma0, value, method, 0.0};
}

AsePoint ase_mc(std::span<const double> sinr_samples, double lambda, double gamma0)
{
    if (sinr_samples.empty()) {
        throw std::invalid_argument("ase_mc: no samples");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("ase_mc: lambda must be positive");
    }
    const auto n = static_cast<double>(sinr_samples.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double s : sinr_samples) {
        const double x = s > gamma0 ? std::log2(1.0 + s) : 0.0;
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    double se = 0.0;
    if (sinr_samples.size() > 1) {
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        se = std::sqrt(var / n);
    }
    return {lambda, gamma0, lambda * mean, Method::MonteCarlo, lambda * se};
}

}  // namespace losnlos
