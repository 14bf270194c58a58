#include "losnlos/case3gpp.hpp"

#include "losnlos/hypergeometric.hpp"
#include "losnlos/quadrature.hpp"
#include "losnlos/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace losnlos::case3gpp {

Case1Params Case1Params::defaults(double lambda)
{
    using namespace case1_defaults;
    Case1Params c;
    c.d1 = kD1;
    c.a_los = std::pow(10.0, kLog10ALos);
    c.alpha_los = kAlphaLos;
    c.a_nlos = std::pow(10.0, kLog10ANlos);
    c.alpha_nlos = kAlphaNlos;
    c.lambda = lambda;
    c.p_tx = dbm_to_mw(kPtxDbm);
    c.n0 = dbm_to_mw(kN0Dbm);
    return c;
}

Case1Params Case1Params::from_scenario(const Scenario& s, double lambda)
{
    const PathLossSegment* pair = s.path_loss.uniform_pair();
    if (pair == nullptr) {
        throw std::invalid_argument("closed forms need one path loss pair on the whole axis");
    }
    const auto* lin = std::get_if<los::Linear>(&s.los.shape());
    if (lin == nullptr) {
        throw std::invalid_argument("closed forms need a linear LoS probability");
    }
    Case1Params c;
    c.d1 = lin->d1;
    c.a_los = pair->a_los;
    c.alpha_los = pair->alpha_los;
    c.a_nlos = pair->a_nlos;
    c.alpha_nlos = pair->alpha_nlos;
    c.lambda = lambda;
    c.p_tx = s.p_tx_mw;
    c.n0 = s.n0_mw;
    c.validate();
    return c;
}

void Case1Params::validate() const
{
    if (!(d1 > 0.0 && a_los > 0.0 && a_nlos > 0.0 && alpha_los > 0.0 && lambda > 0.0 && p_tx > 0.0 && n0 > 0.0)) {
        throw std::invalid_argument("Case1Params: all parameters must be positive");
    }
    if (!(alpha_nlos > 2.0)) {
        throw std::invalid_argument("Case1Params: NLoS exponent must exceed 2");
    }
    if (alpha_nlos < alpha_los) {
        throw std::invalid_argument("Case1Params: NLoS exponent below LoS exponent");
    }
    const double y = y1();
    if (!(y > 0.0 && y < d1)) {
        throw std::invalid_argument("Case1Params: y1 must lie in (0, d1)");
    }
}

double Case1Params::y1() const
{
    return std::pow(d1, alpha_los / alpha_nlos) * std::pow(a_nlos / a_los, 1.0 / alpha_nlos);
}

double Case1Params::r1(double r) const
{
    return power_law_equal_loss(a_los, alpha_los, a_nlos, alpha_nlos, r);
}

double Case1Params::r2(double r) const
{
    return power_law_equal_loss(a_nlos, alpha_nlos, a_los, alpha_los, r);
}

namespace {

void require_range(double r, double lo, double hi, const char* what)
{
    if (!(r > lo && r <= hi)) {
        throw std::domain_error(what);
    }
}

/// int_a^b (1 - u/d1) u / (1 + t u^alpha) du
double los_ramp(double alpha, double t, double a, double b, double d1)
{
    return (rho1(alpha, 1.0, t, b) - rho1(alpha, 1.0, t, a)) - (rho1(alpha, 2.0, t, b) - rho1(alpha, 2.0, t, a)) / d1;
}

/// int_a^b (u/d1) u / (1 + t u^alpha) du
double nlos_ramp(double alpha, double t, double a, double b, double d1)
{
    return (rho1(alpha, 2.0, t, b) - rho1(alpha, 2.0, t, a)) / d1;
}

}  // namespace

double pdf_los(const Case1Params& c, double r)
{
    if (!(r > 0.0)) {
        throw std::domain_error("pdf_los: r must be positive");
    }
    if (r > c.d1) {
        return 0.0;
    }
    const double l = c.lambda;
    const double r1 = c.r1(r);
    const double e = -kPi * l * r * r + 2.0 * kPi * l * (r * r * r - r1 * r1 * r1) / (3.0 * c.d1);
    return std::exp(e) * (1.0 - r / c.d1) * 2.0 * kPi * r * l;
}

double pdf_nlos(const Case1Params& c, double r)
{
    if (!(r > 0.0)) {
        throw std::domain_error("pdf_nlos: r must be positive");
    }
    const double l = c.lambda;
    if (r > c.d1) {
        return std::exp(-kPi * l * r * r) * 2.0 * kPi * r * l;
    }
    double e = 0.0;
    if (r <= c.y1()) {
        const double r2 = c.r2(r);
        e = -kPi * l * r2 * r2 + 2.0 * kPi * l * (r2 * r2 * r2 - r * r * r) / (3.0 * c.d1);
    } else {
        e = -kPi * l * c.d1 * c.d1 / 3.0 - 2.0 * kPi * l * r * r * r / (3.0 * c.d1);
    }
    return std::exp(e) * (r / c.d1) * 2.0 * kPi * r * l;
}

double laplace_los_near(const Case1Params& c, double gamma, double r)
{
    require_range(r, 0.0, c.d1, "laplace_los_near: r outside (0, d1]");
    if (gamma == 0.0) {
        return 1.0;
    }
    const double t_los = 1.0 / (gamma * std::pow(r, c.alpha_los));
    const double t_nlos = 1.0 / (gamma * (c.a_nlos / c.a_los) * std::pow(r, c.alpha_los));
    const double r1 = c.r1(r);
    const double sum = los_ramp(c.alpha_los, t_los, r, c.d1, c.d1) + nlos_ramp(c.alpha_nlos, t_nlos, r1, c.d1, c.d1) +
                       rho2(c.alpha_nlos, 1.0, t_nlos, c.d1);
    return std::exp(-2.0 * kPi * c.lambda * sum);
}

double laplace_nlos_near(const Case1Params& c, double gamma, double r)
{
    require_range(r, 0.0, c.d1, "laplace_nlos_near: r outside (0, d1]");
    if (gamma == 0.0) {
        return 1.0;
    }
    const double t_los = 1.0 / (gamma * (c.a_los / c.a_nlos) * std::pow(r, c.alpha_nlos));
    const double t_nlos = 1.0 / (gamma * std::pow(r, c.alpha_nlos));
    double sum = nlos_ramp(c.alpha_nlos, t_nlos, r, c.d1, c.d1) + rho2(c.alpha_nlos, 1.0, t_nlos, c.d1);
    if (r <= c.y1()) {
        sum += los_ramp(c.alpha_los, t_los, c.r2(r), c.d1, c.d1);
    }
    return std::exp(-2.0 * kPi * c.lambda * sum);
}

double laplace_nlos_far(const Case1Params& c, double gamma, double r)
{
    if (!(r > c.d1)) {
        throw std::domain_error("laplace_nlos_far: r must exceed d1");
    }
    if (gamma == 0.0) {
        return 1.0;
    }
    const double t_nlos = 1.0 / (gamma * std::pow(r, c.alpha_nlos));
    return std::exp(-2.0 * kPi * c.lambda * rho2(c.alpha_nlos, 1.0, t_nlos, r));
}

CoveragePoint coverage_case1(const Case1Params& c, double gamma, double abs_tol)
{
    c.validate();
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("coverage_case1: gamma must be positive");
    }
    const auto noise = [&](double r, double a, double alpha) {
        return std::exp(-gamma * c.n0 * std::pow(r, alpha) / (c.p_tx * a));
    };
    const auto t_los = [&](double r) {
        const double pdf = pdf_los(c, r);
        return pdf == 0.0 ? 0.0 : noise(r, c.a_los, c.alpha_los) * laplace_los_near(c, gamma, r) * pdf;
    };
    const auto t_nlos_near = [&](double r) {
        const double n = noise(r, c.a_nlos, c.alpha_nlos);
        return n == 0.0 ? 0.0 : n * laplace_nlos_near(c, gamma, r) * pdf_nlos(c, r);
    };
    const auto t_nlos_far = [&](double r) {
        const double n = noise(r, c.a_nlos, c.alpha_nlos);
        return n == 0.0 ? 0.0 : n * laplace_nlos_far(c, gamma, r) * pdf_nlos(c, r);
    };

    // Panel edges: y1, d1 and a few multiples of the typical BS spacing.
    std::vector<double> edges{c.y1(), c.d1};
    const double spacing = 1.0 / std::sqrt(kPi * c.lambda);
    for (double k : {0.1, 0.3, 1.0, 2.0, 4.0}) {
        edges.push_back(k * spacing);
    }
    std::sort(edges.begin(), edges.end());

    const QuadratureTolerance tol{abs_tol / 16.0, 1e-12};
    double value = 0.0;
    double error = 0.0;
    const auto add = [&](const Integrand& g, double a, double b) {
        if (b <= a) {
            return;
        }
        const auto res = integrate(g, a, b, tol);
        value += res.value;
        error += res.abs_error;
    };

    double lo = 0.0;
    for (double e : edges) {
        if (e > c.d1) {
            break;
        }
        add(t_los, lo, e);
        add(t_nlos_near, lo, e);
        lo = e;
    }
    lo = c.d1;
    for (double e : edges) {
        if (e > lo) {
            add(t_nlos_far, lo, e);
            lo = e;
        }
    }
    const auto tail = integrate_tail(t_nlos_far, lo, tol);
    value += tail.value;
    error += tail.abs_error;
    return {c.lambda, gamma, value, Method::AnalyticClosed, error};
}

}  // namespace losnlos::case3gpp
