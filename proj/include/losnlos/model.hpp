#pragma once

#include <limits>
#include <concepts>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace losnlos {

enum class Branch { Los, Nlos };

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// One distance range of the path loss model with its LoS and NLoS power
/// laws, zeta(r) = A * r^-alpha (linear gain, r in km).
struct PathLossSegment {
    double d_lo = 0.0;
    double d_hi = kUnbounded;
    double a_los = 1.0;
    double alpha_los = 2.0;
    double a_nlos = 1.0;
    double alpha_nlos = 2.0;

    double gain(double r, Branch b) const;
};

/// Piecewise LoS/NLoS power-law model. Segments tile (0, inf); a break
/// distance belongs to the lower segment.
class PathLossModel {
public:
    explicit PathLossModel(std::vector<PathLossSegment> segments);

    /// Same power-law pair on the whole positive axis.
    static PathLossModel single(double a_los, double alpha_los, double a_nlos, double alpha_nlos);

    const std::vector<PathLossSegment>& segments() const { return segments_; }
    /// Interior break distances d_1 < ... < d_{N-1}.
    std::vector<double> breaks() const;

    std::size_t segment_index(double r) const;
    const PathLossSegment& segment_at(double r) const { return segments_[segment_index(r)]; }

    /// Linear path gain of the requested branch at r > 0.
    double gain(double r, Branch b) const;

    /// Smallest distance beyond which the branch gain stays at or below
    /// `target`. 0 when every gain is below the target, kUnbounded when none is.
    double inverse_gain(double target, Branch b) const;
    /// Same as inverse_gain but always by bisection on the stacked function.
    double inverse_gain_bisection(double target, Branch b) const;

    /// The (A, alpha) pairs when every segment carries the same ones.
    const PathLossSegment* uniform_pair() const { return uniform_ ? &segments_.front() : nullptr; }

private:
    std::vector<PathLossSegment> segments_;
    bool uniform_ = false;
};

enum class EqualLossDirection { LosToNlos, NlosToLos };

/// r1 with zeta^NL(r1) = zeta^L(r) (LosToNlos) or r2 with zeta^L(r2) = zeta^NL(r).
double equal_loss_radius(const PathLossModel& m, double r, EqualLossDirection dir);

/// Closed-form power-law inversion for a single exponent pair,
/// r1 = (A_to / A_from)^(1/alpha_to) * r^(alpha_from / alpha_to).
double power_law_equal_loss(double a_from, double alpha_from, double a_to, double alpha_to, double r);

namespace los {

/// 1 - r/d1 on (0, d1], 0 beyond.
struct Linear {
    double d1;
};

/// 0.5 - min(0.5, 5 exp(-R1/r)) + min(0.5, 5 exp(-r/R2)); switches branch at
/// d1 = R1 / ln 10.
struct TwoPieceExp {
    double r1;
    double r2;
    double d1() const;
};

struct Knot {
    double distance;
    double probability;
};

/// Linear interpolation between knots, constant outside them.
struct PiecewiseLinear {
    std::vector<Knot> knots;
};

struct AlwaysNlos {};

}  // namespace los

/// LoS probability as a function of link distance, together with a table of
/// its cumulative "LoS mass" M(x) = int_0^x Pr^L(u) 2 pi u du built once at
/// construction. Immutable, cheap to copy.
class LosProbabilityFn {
public:
    using Shape = std::variant<los::Linear, los::TwoPieceExp, los::PiecewiseLinear, los::AlwaysNlos>;

    LosProbabilityFn(Shape shape);  // NOLINT: implicit from a shape is convenient
    template <class S>
        requires(!std::same_as<std::remove_cvref_t<S>, Shape> && std::constructible_from<Shape, S>)
    LosProbabilityFn(S&& shape)  // NOLINT
        : LosProbabilityFn(Shape(std::forward<S>(shape)))
    {
    }

    const Shape& shape() const { return shape_; }
    std::string describe() const;

    double operator()(double r) const;
    /// Distances where the function (or its slope) is not smooth.
    const std::vector<double>& breaks() const { return breaks_; }
    /// Limit of the function at large distance.
    double far_value() const { return far_value_; }
    /// The value beyond the last break when the function is constant there.
    std::optional<double> tail_constant() const;

    /// int_0^x Pr^L(u) 2 pi u du.
    double los_mass(double x) const;

private:
    struct MassTable;

    Shape shape_;
    std::vector<double> breaks_;
    double far_value_ = 0.0;
    std::shared_ptr<const MassTable> mass_;
};

/// Evaluates Pr^L(r); r < 0 is a domain error.
double los_probability(const LosProbabilityFn& f, double r);

/// Linear gain of one branch at r > 0; r <= 0 is a domain error.
double path_loss(const PathLossModel& m, double r, Branch b);

struct NetworkParams {
    double lambda = 1.0;  // BSs per km^2
    double p_tx = 1.0;    // mW
    double n0 = 1.0;      // mW
    double gamma = 1.0;   // linear SINR threshold

    void validate() const;
};

/// A named combination of path loss, LoS probability and radio parameters.
struct Scenario {
    std::string name;
    PathLossModel path_loss;
    LosProbabilityFn los;
    double p_tx_mw;
    double n0_mw;

    NetworkParams network(double lambda, double gamma) const { return {lambda, p_tx_mw, n0_mw, gamma}; }
};

/// Presets: "case1", "case2", "approx-case2", "single-slope".
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

/// Path loss pair shared by the 3GPP presets.
namespace case1_defaults {
inline constexpr double kD1 = 0.3;
inline constexpr double kAlphaLos = 2.09;
inline constexpr double kAlphaNlos = 3.75;
inline constexpr double kLog10ALos = -10.38;
inline constexpr double kLog10ANlos = -14.54;
inline constexpr double kPtxDbm = 24.0;
inline constexpr double kN0Dbm = -95.0;
}  // namespace case1_defaults

}  // namespace losnlos
