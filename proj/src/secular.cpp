#include "quasih/secular.hpp"

#include <cmath>
#include <stdexcept>

namespace quasih {

namespace {

void require_finite(const ParamPoint& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) ||
      !std::isfinite(p.d)) {
    throw std::invalid_argument("quasih: non-finite parameter point");
  }
}

}  // namespace

double constant_term(const ParamPoint& p) {
  const double a2 = p.a * p.a;
  const double b2 = p.b * p.b;
  const double c2 = p.c * p.c;
  const double d2 = p.d * p.d;
  return 9.0 - 9.0 * a2 - b2 + 3.0 * c2 + 3.0 * d2 + a2 * b2 + c2 * d2 -
         2.0 * p.a * p.b * p.c * p.d;
}

double constant_term_scale(const ParamPoint& p) {
  const double a2 = p.a * p.a;
  const double b2 = p.b * p.b;
  const double c2 = p.c * p.c;
  const double d2 = p.d * p.d;
  return 9.0 + 9.0 * a2 + b2 + 3.0 * c2 + 3.0 * d2 + a2 * b2 + c2 * d2 +
         2.0 * std::abs(p.a * p.b * p.c * p.d);
}

SecularInvariants secular_coeffs(const ParamPoint& p) {
  require_finite(p);
  const double a2 = p.a * p.a;
  const double b2 = p.b * p.b;
  const double c2 = p.c * p.c;
  const double d2 = p.d * p.d;

  SecularInvariants s;
  s.e2 = -(10.0 - a2 - b2 - c2 - d2);
  s.e1 = -4.0 * (c2 - d2);
  s.C = constant_term(p);
  s.e0 = s.C;
  s.A = -0.5 * s.e2;
  if (c2 == d2) {
    s.B = s.C;
  }
  const auto hyp = hyperbola_factors(p.a, p.b);
  s.alpha_hyp = hyp.alpha_hyp;
  s.beta_hyp = hyp.beta_hyp;
  return s;
}

ReducedAB reduced_AB(double a, double b, double d) {
  const double d2 = d * d;
  const double shifted = d2 - a * b + 3.0;
  const double skew = b - 3.0 * a;
  return {5.0 - d2 - 0.5 * (a * a + b * b), shifted * shifted - skew * skew};
}

HyperbolaFactors hyperbola_factors(double a, double b) {
  return {(b + 3.0) * (a - 1.0), (b - 3.0) * (a + 1.0)};
}

}  // namespace quasih
