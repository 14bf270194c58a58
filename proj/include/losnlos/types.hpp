#pragma once

#include <string>

namespace losnlos {

/// Where a number came from.
enum class Method { AnalyticGeneral, AnalyticClosed, MonteCarlo };

inline std::string to_string(Method m)
{
    switch (m) {
    case Method::AnalyticGeneral:
        return "analytic-general";
    case Method::AnalyticClosed:
        return "analytic-closed";
    case Method::MonteCarlo:
        return "monte-carlo";
    }
    return "unknown";
}

struct CoveragePoint {
    double lambda = 0.0;
    double gamma = 0.0;
    double p_cov = 0.0;
    Method method = Method::AnalyticGeneral;
    double abs_error_est = 0.0;
};

}  // namespace losnlos
