#include "quasih/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "quasih/domain.hpp"
#include "quasih/errors.hpp"
#include "quasih/secular.hpp"
#include "quasih/spectrum.hpp"

namespace quasih {

namespace {

constexpr double kLowerEdge = -0.5;       // coef_a - coef_c at B = 0
constexpr double kUpperEdge = 8.0 / 9.0;  // coef_a - coef_c at A^2 = B

void require_order(int order) {
  if (order != 2 && order != 4 && order != 6) {
    throw std::invalid_argument("quasih: series order must be 2, 4 or 6 (got " +
                                std::to_string(order) + ")");
  }
}

std::vector<double> series_coefficients(SeriesBranch branch, int order) {
  require_order(order);
  const std::vector<double> full = branch == SeriesBranch::E3
                                       ? std::vector<double>{3.0, -2.0, -1.0, -7.0 / 6.0}
                                       : std::vector<double>{1.0, 0.0, 1.0, 1.5};
  return {full.begin(), full.begin() + order / 2 + 1};
}

template <class Real>
Real evaluate_series(const std::vector<double>& coeffs, Real alpha) {
  const Real x2 = alpha * alpha;
  Real value = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) value = value * x2 + Real(*it);
  return value;
}

template <class Real>
Real exact_level(SeriesBranch branch, Real alpha) {
  const Real x2 = alpha * alpha;
  const Real disc = 5 * x2 * x2 - 12 * x2 + 4;
  if (disc < 0) {
    throw std::invalid_argument("quasih: band levels are complex beyond alpha^2 = 2/5");
  }
  const Real sign = branch == SeriesBranch::E3 ? Real(1) : Real(-1);
  return std::sqrt(5 - 6 * x2 + sign * 2 * std::sqrt(disc));
}

double spike_margin(double a, double c) {
  const auto [A, B] = reduced_AB(a, 0.0, c);
  return std::min({A, A * A - B, B});
}

void require_corner(int corner_a, int corner_c) {
  if ((corner_a != 1 && corner_a != -1) || (corner_c != 1 && corner_c != -1)) {
    throw std::invalid_argument("quasih: spike corner signs must be +1 or -1");
  }
}

}  // namespace

double band_series(SeriesBranch branch, double alpha, int order) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("quasih: non-finite alpha");
  return evaluate_series(series_coefficients(branch, order), alpha);
}

double band_series_E3(double alpha, int order) {
  return band_series(SeriesBranch::E3, alpha, order);
}

double band_series_E1(double alpha, int order) {
  return band_series(SeriesBranch::E1, alpha, order);
}

double band_exact_level(SeriesBranch branch, double alpha) {
  return exact_level<double>(branch, alpha);
}

SeriesCheck check_series(SeriesBranch branch, int order, std::pair<double, double> window,
                         std::size_t probes) {
  if (!(window.second > window.first) || window.first < 0.0 || probes == 0) {
    throw std::invalid_argument("quasih: invalid series window");
  }
  SeriesCheck out;
  out.branch = branch;
  out.order = order;
  out.coefficients = series_coefficients(branch, order);
  out.window = window;

  // The remainder falls to ~1e-15 near the bottom of the window, so the
  // reference and the truncation are both evaluated in extended precision.
  auto error_at = [&](long double alpha) {
    return std::abs(evaluate_series<long double>(out.coefficients, alpha) -
                    exact_level<long double>(branch, alpha));
  };
  out.min_halving_ratio = std::numeric_limits<double>::infinity();
  const double width = window.second - window.first;
  for (std::size_t k = 1; k <= probes; ++k) {
    const long double alpha =
        window.first + width * static_cast<double>(k) / static_cast<double>(probes);
    const long double err = error_at(alpha);
    out.max_abs_error_over_window =
        std::max(out.max_abs_error_over_window, static_cast<double>(err));
    const long double ratio = err / error_at(alpha / 2);
    out.min_halving_ratio = std::min(out.min_halving_ratio, static_cast<double>(ratio));
  }
  out.scaling_ok = out.min_halving_ratio >= 0.8 * std::ldexp(1.0, order + 2);
  return out;
}

double exceptional_discriminant(double alpha) {
  const double x2 = alpha * alpha;
  return 5.0 * x2 * x2 - 12.0 * x2 + 4.0;
}

CriticalStrength critical_strength() {
  CriticalStrength cs;
  cs.alpha_cs = std::sqrt(2.0 / 5.0);
  cs.e_cs = std::sqrt(13.0 / 5.0);
  cs.discriminant_at_cs = exceptional_discriminant(cs.alpha_cs);

  const Spectrum s = numeric_energies(build_alpha({cs.alpha_cs}));
  int negative = 0;
  for (const auto& e : s.energies) {
    cs.numeric_levels.push_back(e.real());
    cs.max_level_deviation =
        std::max({cs.max_level_deviation, std::abs(std::abs(e.real()) - cs.e_cs),
                  std::abs(e.imag())});
    negative += e.real() < 0.0;
  }
  cs.verified = std::abs(cs.discriminant_at_cs) <= 1e-12 &&
                cs.max_level_deviation <= 1e-6 && negative == 2;
  return cs;
}

PlaneAC spike_point(const SpikeAnsatz& ansatz, double t_max) {
  require_corner(ansatz.corner_a, ansatz.corner_c);
  if (!std::isfinite(ansatz.coef_a) || !std::isfinite(ansatz.coef_c) ||
      !std::isfinite(ansatz.t)) {
    throw std::invalid_argument("quasih: non-finite spike ansatz");
  }
  if (ansatz.t < 0.0 || ansatz.t > t_max) {
    throw std::invalid_argument("quasih: spike parameter t outside [0, " +
                                std::to_string(t_max) + "]");
  }
  // The vertex sits at (corner_a * 2, corner_c * sqrt 3), reached at t = 0
  // where the bracket equals -1.
  const double a_pmn = -2.0 * ansatz.corner_a;
  const double c_pmn = -std::sqrt(3.0) * ansatz.corner_c;
  const double t = ansatz.t;
  return {a_pmn * (-1.0 + t + ansatz.coef_a * t * t),
          c_pmn * (-1.0 + t + ansatz.coef_c * t * t)};
}

bool spike_membership(double coef_a, double coef_c, double t) {
  if (t < 0.0) return false;
  const double offset = coef_a - coef_c;
  return offset >= kLowerEdge && offset <= kUpperEdge;
}

bool spike_exact_membership(const SpikeAnsatz& ansatz, double tol) {
  const auto [a, c] = spike_point(ansatz);
  return in_domain(a, 0.0, c, tol).inside;
}

SpikeBand spike_band(double coef_c, double t, int corner_a, int corner_c) {
  require_corner(corner_a, corner_c);
  if (!(t > 0.0) || t > kSpikeTMax) {
    throw std::invalid_argument("quasih: spike band needs 0 < t <= 0.2");
  }
  auto margin = [&](double coef_a) {
    const auto [a, c] = spike_point({t, coef_a, coef_c, corner_a, corner_c});
    return spike_margin(a, c);
  };

  constexpr int kSweep = 801;
  const double from = coef_c - 2.0;
  const double to = coef_c + 2.0;
  auto sample = [&](int k) { return from + (to - from) * k / (kSweep - 1); };
  int first = -1;
  int last = -1;
  for (int k = 0; k < kSweep; ++k) {
    if (margin(sample(k)) >= 0.0) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first <= 0 || last < 0 || last >= kSweep - 1) {
    throw NumericalError("quasih: spike band not bracketed by the coef_a sweep");
  }

  // Bisect between an outside point `out` and an inside point `in`.
  auto edge = [&](double out, double in) {
    for (int i = 0; i < kMaxBisectionSteps && std::abs(in - out) > 1e-15; ++i) {
      const double mid = 0.5 * (out + in);
      (margin(mid) >= 0.0 ? in : out) = mid;
    }
    return in;
  };

  SpikeBand band;
  band.t = t;
  band.coef_c = coef_c;
  band.lower = edge(sample(first - 1), sample(first));
  band.upper = edge(sample(last + 1), sample(last));
  band.lower_offset = band.lower - (coef_c + kLowerEdge);
  band.upper_offset = band.upper - (coef_c + kUpperEdge);
  return band;
}

std::vector<SpikeSample> spike_scan(double coef_c, const std::vector<double>& ts,
                                    std::size_t resolution, int corner_a, int corner_c) {
  if (resolution < 2) throw std::invalid_argument("quasih: spike scan resolution must be >= 2");
  std::vector<SpikeSample> rows;
  rows.reserve(ts.size() * resolution);
  const double from = coef_c - 1.5;
  const double to = coef_c + 2.0;
  for (double t : ts) {
    for (std::size_t k = 0; k < resolution; ++k) {
      const double coef_a =
          from + (to - from) * static_cast<double>(k) / static_cast<double>(resolution - 1);
      const auto [a, c] = spike_point({t, coef_a, coef_c, corner_a, corner_c});
      rows.push_back({t, coef_a, a, c, in_domain(a, 0.0, c, 1e-12).inside});
    }
  }
  return rows;
}

}  // namespace quasih
