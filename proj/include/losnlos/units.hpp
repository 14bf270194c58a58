#pragma once

#include <cmath>

namespace losnlos {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

// dBm and mW share the same mapping.
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace losnlos
