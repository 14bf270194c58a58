#pragma once

#include "losnlos/types.hpp"

#include <functional>
#include <span>

namespace losnlos {

/// p_cov(gamma) at a fixed density, gamma linear.
using CoverageFn = std::function<double(double)>;

struct AsePoint {
    double lambda = 0.0;
    double gamma0 = 0.0;
    double ase = 0.0;  // bps/Hz/km^2
    Method method = Method::AnalyticGeneral;
    double std_error = 0.0;
};

struct AseTolerance {
    double abs = 1e-9;
    double rel = 1e-9;
};

/// Area spectral efficiency lambda * E[log2(1 + SINR) 1{SINR > gamma0}],
/// evaluated as lambda [log2(1 + g0) p(g0) + (1/ln 2) int_g0^inf p(g)/(1+g) dg].
/// The tail integral runs in log(gamma) and stops once p has died out.
AsePoint ase(const CoverageFn& p_cov, double lambda, double gamma0, Method method = Method::AnalyticGeneral,
             const AseTolerance& tol = {});

/// Direct estimator of the same expectation from simulated SINR samples.
AsePoint ase_mc(std::span<const double> sinr_samples, double lambda, double gamma0);

}  // namespace losnlos
