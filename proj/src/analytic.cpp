#include "losnlos/analytic.hpp"

#include "losnlos/quadrature.hpp"
#include "losnlos/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace losnlos::analytic {

namespace {

double other_branch_radius(const PathLossModel& m, double target_gain, Branch b)
{
    return m.inverse_gain(target_gain, b);
}

double nlos_mass(const LosProbabilityFn& f, double x)
{
    return kPi * x * x - f.los_mass(x);
}

double pdf_branch(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double r, Branch b)
{
    if (!(r > 0.0)) {
        throw std::domain_error("serving-distance density needs r > 0");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("BS density must be positive");
    }
    const double p_los = f(r);
    const double weight = b == Branch::Los ? p_los : 1.0 - p_los;
    if (weight <= 0.0) {
        return 0.0;
    }
    const double zeta = m.gain(r, b);
    double exponent = 0.0;
    if (b == Branch::Los) {
        // No LoS BS closer than r, no NLoS BS closer than r1.
        const double r1 = other_branch_radius(m, zeta, Branch::Nlos);
        exponent = f.los_mass(r) + nlos_mass(f, r1);
    } else {
        const double r2 = other_branch_radius(m, zeta, Branch::Los);
        exponent = nlos_mass(f, r) + f.los_mass(r2);
    }
    return std::exp(-lambda * exponent) * weight * 2.0 * kPi * r * lambda;
}

/// All breaks of the model plus the distances at which an equal-loss image
/// (r1 or r2) crosses one of them.
std::vector<double> structural_points(const PathLossModel& m, const LosProbabilityFn& f)
{
    std::vector<double> base = m.breaks();
    base.insert(base.end(), f.breaks().begin(), f.breaks().end());
    std::vector<double> out = base;
    for (double d : base) {
        out.push_back(m.inverse_gain(m.gain(d, Branch::Nlos), Branch::Los));
        out.push_back(m.inverse_gain(m.gain(d, Branch::Los), Branch::Nlos));
    }
    return out;
}

std::vector<double> sorted_positive(std::vector<double> v)
{
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !(x > 0.0) || !std::isfinite(x); }), v.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Split points for integrals over the serving distance.
std::vector<double> distance_splits(const PathLossModel& m, const LosProbabilityFn& f, double lambda)
{
    std::vector<double> pts = structural_points(m, f);
    const double scale = 1.0 / std::sqrt(kPi * lambda);
    for (double c : {0.1, 0.3, 1.0, 2.0, 4.0}) {
        pts.push_back(c * scale);
    }
    return sorted_positive(std::move(pts));
}

/// Integral over (0, inf) of g, split at `splits`, last piece as a tail.
QuadratureResult integrate_distance(const Integrand& g, const std::vector<double>& splits, double abs_tol, double rel)
{
    QuadratureTolerance tol{abs_tol / static_cast<double>(splits.size() + 1), rel};
    QuadratureResult out;
    double lo = 0.0;
    for (double hi : splits) {
        const auto piece = integrate(g, lo, hi, tol);
        out.value += piece.value;
        out.abs_error += piece.abs_error;
        out.evaluations += piece.evaluations;
        lo = hi;
    }
    const auto tail = integrate_tail(g, lo, tol);
    out.value += tail.value;
    out.abs_error += tail.abs_error;
    out.evaluations += tail.evaluations;
    return out;
}

/// int_x^inf weight(u) u / (1 + 1/(s P zeta_b(u))) du, with weight Pr^L for
/// LoS interferers and 1 - Pr^L for NLoS ones.
double interference_integral(const PathLossModel& m, const LosProbabilityFn& f, double s_p, Branch b, double x,
                             const std::vector<double>& breaks, const QuadratureTolerance& tol)
{
    const auto integrand = [&](double u) {
        const double p = f(u);
        const double w = b == Branch::Los ? p : 1.0 - p;
        if (w <= 0.0) {
            return 0.0;
        }
        const double k = s_p * m.gain(u, b);
        return w * u * k / (1.0 + k);
    };

    double total = 0.0;
    double lo = x;
    for (double d : breaks) {
        if (d <= lo) {
            continue;
        }
        total += integrate(integrand, lo, d, tol).value;
        lo = d;
    }
    const auto tail = f.tail_constant();
    const bool empty_tail = tail && (b == Branch::Los ? *tail == 0.0 : *tail == 1.0);
    if (!empty_tail) {
        total += integrate_tail(integrand, lo, tol).value;
    }
    return total;
}

}  // namespace

double pdf_distance_los(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double r)
{
    return pdf_branch(m, f, lambda, r, Branch::Los);
}

double pdf_distance_nlos(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double r)
{
    return pdf_branch(m, f, lambda, r, Branch::Nlos);
}

DistancePdfSample pdf_distance(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double r)
{
    return {r, pdf_distance_los(m, f, lambda, r), pdf_distance_nlos(m, f, lambda, r)};
}

double distance_law_mass(const PathLossModel& m, const LosProbabilityFn& f, double lambda, const EngineTolerance& tol)
{
    const auto g = [&](double r) {
        return pdf_branch(m, f, lambda, r, Branch::Los) + pdf_branch(m, f, lambda, r, Branch::Nlos);
    };
    return integrate_distance(g, distance_splits(m, f, lambda), tol.coverage, tol.rel).value;
}

double laplace_interference(const PathLossModel& m, const LosProbabilityFn& f, double lambda, double s,
                            Branch serving, double r, double p_tx, const EngineTolerance& tol)
{
    if (!(r > 0.0)) {
        throw std::domain_error("laplace_interference: r must be positive");
    }
    if (s < 0.0) {
        throw std::domain_error("laplace_interference: s must be non-negative");
    }
    if (s == 0.0) {
        return 1.0;
    }
    const double serving_gain = m.gain(r, serving);
    const double x_los = serving == Branch::Los ? r : m.inverse_gain(serving_gain, Branch::Los);
    const double x_nlos = serving == Branch::Nlos ? r : m.inverse_gain(serving_gain, Branch::Nlos);

    std::vector<double> breaks = m.breaks();
    breaks.insert(breaks.end(), f.breaks().begin(), f.breaks().end());
    breaks = sorted_positive(std::move(breaks));

    const double scale = 2.0 * kPi * lambda;
    const QuadratureTolerance qt{0.5 * tol.laplace / scale / static_cast<double>(breaks.size() + 1), tol.rel};
    const double s_p = s * p_tx;

    double exponent = 0.0;
    if (!std::holds_alternative<los::AlwaysNlos>(f.shape()) && std::isfinite(x_los)) {
        exponent += interference_integral(m, f, s_p, Branch::Los, x_los, breaks, qt);
    }
    if (std::isfinite(x_nlos)) {
        exponent += interference_integral(m, f, s_p, Branch::Nlos, x_nlos, breaks, qt);
    }
    return std::exp(-scale * exponent);
}

CoveragePoint coverage_probability(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                                   const EngineTolerance& tol)
{
    params.validate();
    const double lambda = params.lambda;
    const double gamma = params.gamma;

    const auto integrand = [&](double r) {
        double sum = 0.0;
        for (Branch b : {Branch::Los, Branch::Nlos}) {
            const double pdf = pdf_branch(m, f, lambda, r, b);
            if (pdf == 0.0) {
                continue;
            }
            const double received = params.p_tx * m.gain(r, b);
            const double noise_term = std::exp(-gamma * params.n0 / received);
            if (noise_term == 0.0) {
                continue;
            }
            const double s = gamma / received;
            sum += noise_term * laplace_interference(m, f, lambda, s, b, r, params.p_tx, tol) * pdf;
        }
        return sum;
    };

    const auto res = integrate_distance(integrand, distance_splits(m, f, lambda), tol.coverage, tol.rel);
    if (res.value < -1e-9 || res.value > 1.0 + 1e-9 || !std::isfinite(res.value)) {
        std::ostringstream os;
        os << "coverage probability " << res.value << " outside [0, 1] at lambda=" << lambda;
        throw std::logic_error(os.str());
    }
    return {lambda, gamma, res.value, Method::AnalyticGeneral, res.abs_error};
}

PeakResult find_peak(const std::function<double(double)>& p_of_lambda, std::pair<double, double> range,
                     const PeakOptions& opts)
{
    auto [lo, hi] = range;
    if (!(lo > 0.0 && hi > lo) || opts.scan_points < 3) {
        throw std::invalid_argument("find_peak: need 0 < lo < hi and at least 3 scan points");
    }
    PeakResult out;
    const int n = opts.scan_points;
    std::vector<double> grid(n);
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        values[i] = p_of_lambda(grid[i]);
    }
    out.evaluations = n;

    const auto best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
    if (best == 0 || best == n - 1) {
        std::ostringstream os;
        os << "no interior peak on [" << lo << ", " << hi << "]: maximum at the "
           << (best == 0 ? "lower" : "upper") << " end";
        throw NoInteriorPeak(os.str());
    }
    // Rising up to the best scan point, falling after it.
    const double noise = 1e-9;
    for (int i = 0; i < n - 1; ++i) {
        const double step = values[i + 1] - values[i];
        if ((i < best && step < -noise) || (i >= best && step > noise)) {
            throw NoInteriorPeak("coverage curve is not unimodal on the scan grid");
        }
    }

    const double h = opts.fd_rel_step;
    const auto slope = [&](double lambda) {
        out.evaluations += 2;
        return (p_of_lambda(lambda * (1.0 + h)) - p_of_lambda(lambda * (1.0 - h))) / (2.0 * h * lambda);
    };

    double a = grid[best - 1];
    double b = grid[best + 1];
    if (!(slope(a) > 0.0) || !(slope(b) < 0.0)) {
        throw NoInteriorPeak("derivative does not change sign around the scan maximum");
    }
    while (b / a - 1.0 > opts.lambda_rel_tol) {
        const double mid = std::sqrt(a * b);
        if (slope(mid) > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    out.bracket_lo = a;
    out.bracket_hi = b;
    out.lambda_star = std::sqrt(a * b);
    out.p_cov = p_of_lambda(out.lambda_star);
    ++out.evaluations;
    return out;
}

PeakResult find_coverage_peak(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                              std::pair<double, double> lambda_range, const PeakOptions& opts,
                              const EngineTolerance& tol)
{
    return find_peak(
        [&](double lambda) {
            NetworkParams p = params;
            p.lambda = lambda;
            return coverage_probability(m, f, p, tol).p_cov;
        },
        lambda_range, opts);
}

}  // namespace losnlos::analytic
