#pragma once

#include <optional>

#include "quasih/model.hpp"

namespace quasih {

/// Coefficients of det(H - E) = E^4 + e3 E^3 + e2 E^2 + e1 E + e0 for the
/// 4x4 model, together with the derived reduced quantities.
struct SecularInvariants {
  double e4 = 1.0;
  double e3 = 0.0;  // always zero: the shifted model is traceless
  double e2 = 0.0;
  double e1 = 0.0;
  double e0 = 0.0;
  double A = 0.0;           ///< -e2 / 2
  std::optional<double> B;  ///< e0, populated only when c^2 == d^2
  double C = 0.0;           ///< constant-term invariant, equal to e0
  double alpha_hyp = 0.0;   ///< (b + 3)(a - 1)
  double beta_hyp = 0.0;    ///< (b - 3)(a + 1)
};

struct ReducedAB {
  double A = 0.0;
  double B = 0.0;
};

struct HyperbolaFactors {
  double alpha_hyp = 0.0;
  double beta_hyp = 0.0;
};

SecularInvariants secular_coeffs(const ParamPoint& p);

/// C(a,b,c,d) = 9 - 9a^2 - b^2 + 3c^2 + 3d^2 + a^2 b^2 + c^2 d^2 - 2abcd.
double constant_term(const ParamPoint& p);

/// Reduced quantities of the c^2 = d^2 model, in which the secular
/// polynomial becomes E^4 - 2A E^2 + B:
///   A = 5 - d^2 - (a^2 + b^2)/2,   B = (d^2 - ab + 3)^2 - (b - 3a)^2.
/// Only (a, b, d) are taken so the restriction is explicit at the call site.
ReducedAB reduced_AB(double a, double b, double d);

/// Factors with (d^2 - alpha_hyp)(d^2 - beta_hyp) == C(a, b, d, d).
HyperbolaFactors hyperbola_factors(double a, double b);

/// Sum of the absolute values of the monomials of C(a,b,c,d); the natural
/// magnitude against which rounding in C is measured.
double constant_term_scale(const ParamPoint& p);

}  // namespace quasih
