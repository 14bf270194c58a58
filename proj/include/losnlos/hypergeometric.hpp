#pragma once

/// Gauss hypergeometric function for the a = 1, c = b + 1 family and the
/// two partial interference integrals built on it.
namespace losnlos {

/// 2F1(a, b; c; z) restricted to a = 1, c = b + 1, b > 0, z <= 0.
/// Anything outside that family throws std::domain_error.
double hyp2f1(double a, double b, double c, double z);

/// 2F1(1, b; b + 1; z) for b > 0, z <= 0.
double hyp2f1_unit(double b, double z);

/// int_0^d u^beta / (1 + t u^alpha) du for alpha > 0, beta >= 0, t >= 0, d >= 0.
double rho1(double alpha, double beta, double t, double d);

/// int_d^inf u^beta / (1 + t u^alpha) du for alpha > beta + 1, t > 0, d > 0.
double rho2(double alpha, double beta, double t, double d);

}  // namespace losnlos
