#include "losnlos/model.hpp"

#include "losnlos/quadrature.hpp"
#include "losnlos/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace losnlos {

double PathLossSegment::gain(double r, Branch b) const
{
    return b == Branch::Los ? a_los * std::pow(r, -alpha_los) : a_nlos * std::pow(r, -alpha_nlos);
}

PathLossModel::PathLossModel(std::vector<PathLossSegment> segments) : segments_(std::move(segments))
{
    if (segments_.empty()) {
        throw std::invalid_argument("path loss model needs at least one segment");
    }
    if (segments_.front().d_lo != 0.0) {
        throw std::invalid_argument("first path loss segment must start at 0");
    }
    if (segments_.back().d_hi != kUnbounded) {
        throw std::invalid_argument("last path loss segment must be unbounded");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (!(s.d_lo < s.d_hi)) {
            throw std::invalid_argument("path loss segment with d_lo >= d_hi");
        }
        if (!(s.a_los > 0.0 && s.a_nlos > 0.0 && s.alpha_los > 0.0 && s.alpha_nlos > 0.0)) {
            throw std::invalid_argument("path loss gains and exponents must be positive");
        }
        if (s.alpha_nlos < s.alpha_los) {
            throw std::invalid_argument("NLoS exponent must not be smaller than the LoS exponent");
        }
        if (i + 1 < segments_.size()) {
            const auto& next = segments_[i + 1];
            if (next.d_lo != s.d_hi) {
                throw std::invalid_argument("path loss segments must tile (0, inf) without gaps");
            }
            // The stacked branches must not increase across a break, otherwise
            // the interference exclusion region is not a disk.
            for (Branch b : {Branch::Los, Branch::Nlos}) {
                if (next.gain(s.d_hi, b) > s.gain(s.d_hi, b)) {
                    throw std::invalid_argument("path gain increases across a segment break");
                }
            }
        }
    }
    const auto& f = segments_.front();
    uniform_ = std::all_of(segments_.begin(), segments_.end(), [&](const PathLossSegment& s) {
        return s.a_los == f.a_los && s.alpha_los == f.alpha_los && s.a_nlos == f.a_nlos &&
               s.alpha_nlos == f.alpha_nlos;
    });
}

PathLossModel PathLossModel::single(double a_los, double alpha_los, double a_nlos, double alpha_nlos)
{
    return PathLossModel({PathLossSegment{0.0, kUnbounded, a_los, alpha_los, a_nlos, alpha_nlos}});
}

std::vector<double> PathLossModel::breaks() const
{
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        out.push_back(segments_[i].d_hi);
    }
    return out;
}

std::size_t PathLossModel::segment_index(double r) const
{
    const auto it = std::lower_bound(segments_.begin(), segments_.end(), r,
                                     [](const PathLossSegment& s, double x) { return s.d_hi < x; });
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - segments_.begin(), segments_.size() - 1));
}

double PathLossModel::gain(double r, Branch b) const { return segment_at(r).gain(r, b); }

double PathLossModel::inverse_gain(double target, Branch b) const
{
    if (uniform_ && target > 0.0 && std::isfinite(target)) {
        const auto& s = segments_.front();
        const double a = b == Branch::Los ? s.a_los : s.a_nlos;
        const double alpha = b == Branch::Los ? s.alpha_los : s.alpha_nlos;
        return std::pow(a / target, 1.0 / alpha);
    }
    return inverse_gain_bisection(target, b);
}

double PathLossModel::inverse_gain_bisection(double target, Branch b) const
{
    if (!(target > 0.0)) {
        return kUnbounded;
    }
    if (!std::isfinite(target)) {
        return 0.0;
    }
    // Bracket lo < x <= hi with gain(lo) > target >= gain(hi).
    double lo = 1.0;
    double hi = 1.0;
    while (gain(lo, b) <= target) {
        lo *= 0.5;
        if (lo < 1e-300) {
            return 0.0;
        }
    }
    while (gain(hi, b) > target) {
        hi *= 2.0;
        if (hi > 1e300) {
            return kUnbounded;
        }
    }
    if (hi == lo) {
        lo = 0.5 * hi;
    }
    for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
        const double mid = hi > 2.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (gain(mid, b) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double equal_loss_radius(const PathLossModel& m, double r, EqualLossDirection dir)
{
    if (!(r > 0.0)) {
        throw std::domain_error("equal_loss_radius: r must be positive");
    }
    return dir == EqualLossDirection::LosToNlos ? m.inverse_gain(m.gain(r, Branch::Los), Branch::Nlos)
                                                : m.inverse_gain(m.gain(r, Branch::Nlos), Branch::Los);
}

double power_law_equal_loss(double a_from, double alpha_from, double a_to, double alpha_to, double r)
{
    return std::pow(a_to / a_from, 1.0 / alpha_to) * std::pow(r, alpha_from / alpha_to);
}

double los::TwoPieceExp::d1() const { return r1 / std::log(10.0); }

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double evaluate(const LosProbabilityFn::Shape& shape, double r)
{
    return std::visit(
        overloaded{
            [r](const los::Linear& f) { return r <= f.d1 ? 1.0 - r / f.d1 : 0.0; },
            [r](const los::TwoPieceExp& f) {
                if (r <= 0.0) {
                    return 1.0;
                }
                const double near = std::min(0.5, 5.0 * std::exp(-f.r1 / r));
                const double far = std::min(0.5, 5.0 * std::exp(-r / f.r2));
                return std::clamp(0.5 - near + far, 0.0, 1.0);
            },
            [r](const los::PiecewiseLinear& f) {
                const auto& k = f.knots;
                if (r <= k.front().distance) {
                    return k.front().probability;
                }
                for (std::size_t i = 0; i + 1 < k.size(); ++i) {
                    if (r <= k[i + 1].distance) {
                        const double w = (r - k[i].distance) / (k[i + 1].distance - k[i].distance);
                        return k[i].probability + w * (k[i + 1].probability - k[i].probability);
                    }
                }
                return k.back().probability;
            },
            [](const los::AlwaysNlos&) { return 0.0; },
        },
        shape);
}

}  // namespace

struct LosProbabilityFn::MassTable {
    std::vector<double> nodes;
    std::vector<double> cumulative;
};

LosProbabilityFn::LosProbabilityFn(Shape shape) : shape_(std::move(shape))
{
    std::visit(overloaded{
                   [this](const los::Linear& f) {
                       if (!(f.d1 > 0.0)) {
                           throw std::invalid_argument("linear LoS function needs d1 > 0");
                       }
                       breaks_ = {f.d1};
                   },
                   [this](const los::TwoPieceExp& f) {
                       if (!(f.r1 > 0.0 && f.r2 > 0.0)) {
                           throw std::invalid_argument("two-piece exponential LoS function needs R1, R2 > 0");
                       }
                       breaks_ = {f.d1(), f.r2 * std::log(10.0)};
                   },
                   [this](const los::PiecewiseLinear& f) {
                       if (f.knots.empty()) {
                           throw std::invalid_argument("piecewise-linear LoS function needs knots");
                       }
                       for (std::size_t i = 0; i < f.knots.size(); ++i) {
                           const auto& k = f.knots[i];
                           if (!(k.probability >= 0.0 && k.probability <= 1.0) || !(k.distance >= 0.0)) {
                               throw std::invalid_argument("LoS knot outside [0,1] or at negative distance");
                           }
                           if (i > 0 && !(k.distance > f.knots[i - 1].distance)) {
                               throw std::invalid_argument("LoS knot distances must increase strictly");
                           }
                           if (k.distance > 0.0) {
                               breaks_.push_back(k.distance);
                           }
                       }
                   },
                   [](const los::AlwaysNlos&) {},
               },
               shape_);
    std::sort(breaks_.begin(), breaks_.end());
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());

    // Geometric node grid, refined with the breaks, so each cell is smooth.
    auto table = std::make_shared<MassTable>();
    constexpr double first_node = 1e-6;
    constexpr double last_node = 1e4;
    constexpr double ratio = 1.25;
    for (double x = first_node; x < last_node; x *= ratio) {
        table->nodes.push_back(x);
    }
    table->nodes.push_back(last_node);
    for (double b : breaks_) {
        if (b > first_node && b < last_node) {
            table->nodes.push_back(b);
        }
    }
    std::sort(table->nodes.begin(), table->nodes.end());
    table->nodes.erase(std::unique(table->nodes.begin(), table->nodes.end()), table->nodes.end());

    const auto integrand = [this](double u) { return evaluate(shape_, u) * 2.0 * kPi * u; };
    const QuadratureTolerance tol{1e-18, 1e-14};
    double acc = integrate(integrand, 0.0, table->nodes.front(), tol).value;
    table->cumulative.push_back(acc);
    for (std::size_t i = 1; i < table->nodes.size(); ++i) {
        acc += integrate(integrand, table->nodes[i - 1], table->nodes[i], tol).value;
        table->cumulative.push_back(acc);
    }
    far_value_ = evaluate(shape_, last_node);
    mass_ = std::move(table);
}

double LosProbabilityFn::operator()(double r) const { return evaluate(shape_, r); }

std::optional<double> LosProbabilityFn::tail_constant() const
{
    if (std::holds_alternative<los::TwoPieceExp>(shape_)) {
        return std::nullopt;
    }
    return far_value_;
}

double LosProbabilityFn::los_mass(double x) const
{
    if (!(x > 0.0)) {
        return 0.0;
    }
    const auto integrand = [this](double u) { return evaluate(shape_, u) * 2.0 * kPi * u; };
    const QuadratureTolerance tol{1e-18, 1e-14};
    const auto& nodes = mass_->nodes;
    if (x <= nodes.front()) {
        return integrate(integrand, 0.0, x, tol).value;
    }
    if (x >= nodes.back()) {
        return mass_->cumulative.back() + far_value_ * kPi * (x * x - nodes.back() * nodes.back());
    }
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const auto k = static_cast<std::size_t>(it - nodes.begin()) - 1;
    if (x == nodes[k]) {
        return mass_->cumulative[k];
    }
    return mass_->cumulative[k] + integrate(integrand, nodes[k], x, tol).value;
}

std::string LosProbabilityFn::describe() const
{
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const los::Linear& f) { os << "linear:" << f.d1; },
                   [&](const los::TwoPieceExp& f) { os << "two-piece-exp:" << f.r1 << ":" << f.r2; },
                   [&](const los::PiecewiseLinear& f) {
                       os << "piecewise-linear:";
                       for (std::size_t i = 0; i < f.knots.size(); ++i) {
                           os << (i ? "," : "") << f.knots[i].distance << ":" << f.knots[i].probability;
                       }
                   },
                   [&](const los::AlwaysNlos&) { os << "always-nlos"; },
               },
               shape_);
    return os.str();
}

double los_probability(const LosProbabilityFn& f, double r)
{
    if (r < 0.0 || std::isnan(r)) {
        throw std::domain_error("los_probability: negative distance");
    }
    return f(r);
}

double path_loss(const PathLossModel& m, double r, Branch b)
{
    if (!(r > 0.0)) {
        throw std::domain_error("path_loss: distance must be positive");
    }
    return m.gain(r, b);
}

void NetworkParams::validate() const
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("BS density must be positive");
    }
    if (!(p_tx > 0.0 && n0 > 0.0 && gamma > 0.0)) {
        throw std::invalid_argument("transmit power, noise power and SINR threshold must be positive");
    }
}

Scenario preset(const std::string& name)
{
    using namespace case1_defaults;
    const double a_los = std::pow(10.0, kLog10ALos);
    const double a_nlos = std::pow(10.0, kLog10ANlos);
    const double p_tx = dbm_to_mw(kPtxDbm);
    const double n0 = dbm_to_mw(kN0Dbm);
    const auto pair = PathLossModel::single(a_los, kAlphaLos, a_nlos, kAlphaNlos);

    if (name == "case1") {
        return {name, pair, LosProbabilityFn(los::Linear{kD1}), p_tx, n0};
    }
    if (name == "case2") {
        return {name, pair, LosProbabilityFn(los::TwoPieceExp{0.156, 0.03}), p_tx, n0};
    }
    if (name == "approx-case2") {
        return {name, pair, LosProbabilityFn(los::PiecewiseLinear{{{0.0184, 1.0}, {0.1171, 0.0}}}), p_tx, n0};
    }
    if (name == "single-slope") {
        return {name, PathLossModel::single(a_nlos, kAlphaNlos, a_nlos, kAlphaNlos), LosProbabilityFn(los::AlwaysNlos{}), p_tx, n0};
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"case1", "case2", "approx-case2", "single-slope"}; }

}  // namespace losnlos
