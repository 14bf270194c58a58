#pragma once

#include "losnlos/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace losnlos::cli {

/// Bad user input; maps to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;

struct ScenarioSpec {
    std::string preset = "case1";
    std::optional<double> alpha_los;
    std::optional<std::string> los_fn;

    std::string lambda_grid = "0.1:10000:20";
    std::vector<double> gamma_db{0.0};
    std::vector<double> gamma0_db{0.0};
    std::vector<std::string> providers{"analytic-general"};

    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    std::optional<double> disk_radius_km;
    unsigned threads = 0;

    // validate
    std::string reference = "analytic-closed";
    double abs_tol = 0.01;

    std::string out;
};

/// "start:stop:ppd", log-spaced with ppd points per decade, both ends
/// included. start == stop gives one point.
std::vector<double> parse_lambda_grid(const std::string& text);

/// "linear:D1", "two-piece-exp:R1:R2", "piecewise-linear:d:p,d:p,...",
/// "always-nlos".
LosProbabilityFn parse_los_fn(const std::string& text);

/// Preset with the spec's overrides applied.
Scenario build_scenario(const ScenarioSpec& spec);

int cmd_coverage(const ScenarioSpec& spec, std::ostream& out);
int cmd_ase(const ScenarioSpec& spec, std::ostream& out);
int cmd_validate(const ScenarioSpec& spec, std::ostream& out);
int cmd_peak(const ScenarioSpec& spec, std::ostream& out);

/// Full command line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace losnlos::cli
