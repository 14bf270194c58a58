#pragma once

#include "losnlos/model.hpp"
#include "losnlos/types.hpp"

/// Closed forms for the single-pair model with a linear LoS probability
/// 1 - r/d1 (the 3GPP "Case 1" setup). Coverage reduces to one-fold integrals.
namespace losnlos::case3gpp {

struct Case1Params {
    double d1 = case1_defaults::kD1;
    double a_los = 1.0;
    double alpha_los = case1_defaults::kAlphaLos;
    double a_nlos = 1.0;
    double alpha_nlos = case1_defaults::kAlphaNlos;
    double lambda = 1.0;
    double p_tx = 1.0;
    double n0 = 1.0;

    /// Case 1 numbers for the given density.
    static Case1Params defaults(double lambda);
    /// Extracts the parameters from a single-pair scenario with linear LoS
    /// probability; anything else is std::invalid_argument.
    static Case1Params from_scenario(const Scenario& s, double lambda);

    void validate() const;

    /// Distance below which a NLoS-served UE still sees LoS interferers.
    double y1() const;
    /// NLoS distance with the same gain as a LoS link of length r.
    double r1(double r) const;
    /// LoS distance with the same gain as a NLoS link of length r.
    double r2(double r) const;
};

/// Serving-distance densities (1/km) written out for the linear LoS law.
double pdf_los(const Case1Params& c, double r);
double pdf_nlos(const Case1Params& c, double r);

/// Laplace transform of the interference at s = gamma / (P zeta(r)).
/// LoS-served UE, 0 < r <= d1.
double laplace_los_near(const Case1Params& c, double gamma, double r);
/// NLoS-served UE, 0 < r <= d1.
double laplace_nlos_near(const Case1Params& c, double gamma, double r);
/// NLoS-served UE, r > d1.
double laplace_nlos_far(const Case1Params& c, double gamma, double r);

/// Sum of the three one-fold integrals; `abs_tol` bounds each of them.
CoveragePoint coverage_case1(const Case1Params& c, double gamma, double abs_tol = 1e-9);

}  // namespace losnlos::case3gpp
