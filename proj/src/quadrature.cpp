#include "losnlos/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace losnlos {

QuadratureError::QuadratureError(const std::string& what, double worst_lo, double worst_hi,
                                 double worst_error)
    : std::runtime_error(what), lo_(worst_lo), hi_(worst_hi), err_(worst_error)
{
}

namespace {

constexpr std::array<double, 11> kKronrodNodes{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kKronrodWeights{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525089220, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd Kronrod nodes (indices 1, 3, 5, 7, 9).
constexpr std::array<double, 5> kGaussWeights{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    double abs_value;  // integral of |f|, used for the roundoff floor

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod21(const Integrand& f, double lo, double hi)
{
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[10];
    double abs_kronrod = std::abs(kronrod);
    double gauss = 0.0;

    std::array<double, 10> f_left{};
    std::array<double, 10> f_right{};
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double fl = f(center - dx);
        const double fr = f(center + dx);
        f_left[j] = fl;
        f_right[j] = fr;
        kronrod += kKronrodWeights[j] * (fl + fr);
        abs_kronrod += kKronrodWeights[j] * (std::abs(fl) + std::abs(fr));
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * (fl + fr);
        }
    }

    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j) {
        asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
    }

    const double value = kronrod * half;
    const double abs_value = abs_kronrod * std::abs(half);
    asc *= std::abs(half);

    // QUADPACK error heuristic.
    double error = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_value > std::numeric_limits<double>::min() / (50.0 * eps)) {
        error = std::max(50.0 * eps * abs_value, error);
    }
    return {lo, hi, value, error, abs_value};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureTolerance& tol)
{
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw std::invalid_argument("integrate: finite limits required");
    }
    if (a == b) {
        return {};
    }
    const double sign = b > a ? 1.0 : -1.0;
    if (b < a) {
        std::swap(a, b);
    }

    std::priority_queue<Panel> panels;
    Panel first = gauss_kronrod21(f, a, b);
    double total = first.value;
    double total_error = first.error;
    double total_abs = first.abs_value;
    panels.push(first);
    int evaluations = 21;

    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({tol.abs, tol.rel * std::abs(total), 100.0 * eps * total_abs});
    };

    while (total_error > target()) {
        if (static_cast<int>(panels.size()) >= tol.max_intervals) {
            const Panel& worst = panels.top();
            std::ostringstream msg;
            msg << "quadrature did not converge on [" << a << ", " << b << "]: error " << total_error
                << " > " << target() << " after " << panels.size() << " panels";
            throw QuadratureError(msg.str(), worst.lo, worst.hi, worst.error);
        }
        Panel worst = panels.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // Interval exhausted in floating point; accept what is there.
            break;
        }
        panels.pop();
        Panel left = gauss_kronrod21(f, worst.lo, mid);
        Panel right = gauss_kronrod21(f, mid, worst.hi);
        evaluations += 42;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    double value = 0.0;
    double error = 0.0;
    while (!panels.empty()) {
        value += panels.top().value;
        error += panels.top().error;
        panels.pop();
    }
    if (!std::isfinite(value)) {
        throw QuadratureError("quadrature produced a non-finite value", a, b, error);
    }
    return {sign * value, error, evaluations};
}

QuadratureResult integrate_tail(const Integrand& f, double a, const QuadratureTolerance& tol)
{
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("integrate_tail: lower limit must be positive and finite");
    }

    // u = a * exp(x), du = u dx
    const Integrand g = [&](double x) {
        const double u = a * std::exp(x);
        const double v = f(u);
        return v == 0.0 ? 0.0 : v * u;
    };

    constexpr double max_x = 700.0;
    QuadratureTolerance chunk_tol = tol;
    chunk_tol.abs = tol.abs / 8.0;

    QuadratureResult out;
    double x = 0.0;
    double width = 0.5;
    int quiet_chunks = 0;
    bool seen_mass = false;
    // An integrand that vanishes on the first chunks is not yet "settled";
    // after e^48 it is treated as identically zero.
    constexpr double zero_horizon = 48.0;
    while (quiet_chunks < 2) {
        if (x >= max_x) {
            throw QuadratureError("improper integral did not settle before the range limit", a * std::exp(x - width),
                                  a * std::exp(x), std::abs(out.value));
        }
        const double hi = std::min(x + width, max_x);
        const QuadratureResult chunk = integrate(g, x, hi, chunk_tol);
        out.value += chunk.value;
        out.abs_error += chunk.abs_error;
        out.evaluations += chunk.evaluations;
        seen_mass = seen_mass || chunk.value != 0.0;
        const double negligible = 0.25 * std::max(tol.abs, tol.rel * std::abs(out.value));
        const bool quiet = std::abs(chunk.value) <= negligible && (seen_mass || hi >= zero_horizon);
        quiet_chunks = quiet ? quiet_chunks + 1 : 0;
        x = hi;
        width = std::min(2.0 * width, 16.0);
    }
    return out;
}

}  // namespace losnlos
