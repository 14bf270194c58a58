#pragma once

#include "losnlos/model.hpp"
#include "losnlos/types.hpp"

#include <functional>
#include <stdexcept>
#include <utility>

/// Coverage probability for an arbitrary piecewise LoS/NLoS model by direct
/// numerical evaluation of the serving-distance law, the interference
/// Laplace transform and the outer distance integral.
namespace losnlos::analytic {

/// Absolute tolerances of the three nested integral levels. `laplace` is the
/// allowed error on the Laplace exponent 2*pi*lambda*I, not on I itself.
struct EngineTolerance {
    double mass = 1e-10;
    double laplace = 1e-8;
    double coverage = 1e-6;
    double rel = 1e-10;
};

struct DistancePdfSample {
    double r = 0.0;
    double density_los = 0.0;
    double density_nlos = 0.0;
};

/// Density (1/km) of being served by a LoS BS at distance r.
double pdf_distance_los(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double r);
/// Density (1/km) of being served by a NLoS BS at distance r.
double pdf_distance_nlos(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double r);
DistancePdfSample pdf_distance(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double r);

/// Total probability mass of the serving-distance law; 1 up to quadrature error.
double distance_law_mass(const PathLossModel& m, const LosProbabilityFn& f, double lambda,
                         const EngineTolerance& tol = {});

/// E[exp(-s I_r)] for a UE served over `serving` at distance r, Rayleigh
/// fading on every interferer. Interferers are the BSs whose path gain does
/// not exceed the serving one.
double laplace_interference(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double s,
                            Branch serving, double r, double p_tx, const EngineTolerance& tol = {});

CoveragePoint coverage_probability(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                                   const EngineTolerance& tol = {});

class NoInteriorPeak : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PeakOptions {
    int scan_points = 25;
    double fd_rel_step = 1e-3;
    double lambda_rel_tol = 1e-6;
};

struct PeakResult {
    double lambda_star = 0.0;
    double p_cov = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int evaluations = 0;
};

/// Maximiser of a unimodal curve p(lambda) on [lo, hi]: log-spaced scan for
/// the bracket, then bisection on the sign of the central difference
/// dp/dlambda. Throws NoInteriorPeak when the maximum sits on an end point or
/// the scan is not unimodal.
PeakResult find_peak(const std::function<double(double)>& p_of_lambda, std::pair<double, double> range,
                     const PeakOptions& opts = {});

/// find_peak over coverage_probability; params.lambda is ignored.
PeakResult find_coverage_peak(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                              std::pair<double, double> lambda_range, const PeakOptions& opts = {},
                              const EngineTolerance& tol = {1e-12, 1e-10, 1e-9, 1e-11});

}  // namespace losnlos::analytic
