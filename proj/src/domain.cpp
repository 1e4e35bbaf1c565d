#include "quasih/domain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "quasih/errors.hpp"
#include "quasih/secular.hpp"
#include "quasih/spectrum.hpp"

namespace quasih {

namespace {

void require_finite(std::initializer_list<double> values, const char* where) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string("quasih: non-finite input to ") + where);
    }
  }
}

void require_d2(double d2) {
  if (!(d2 > 0.0 && d2 < 5.0)) {
    throw std::invalid_argument("quasih: d^2 must lie in (0, 5)");
  }
}

double margin_at(double a, double b, double d) {
  const auto [A, B] = reduced_AB(a, b, d);
  return std::min({A, A * A - B, B});
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// q(x) = x^4 + 2x^3 + 2 d2 x^2 - 6 d2 x + d2^2, where x = a - 1 parametrises
// the hyperbola d2 = (b + 3)(a - 1) and q = 0 puts it on the PMN circle.
double hyperbola_circle_poly(double x, double d2) {
  return (((x + 2.0) * x + 2.0 * d2) * x - 6.0 * d2) * x + d2 * d2;
}

double hyperbola_circle_slope(double x, double d2) {
  return ((4.0 * x + 6.0) * x + 4.0 * d2) * x - 6.0 * d2;
}

PMNPoint make_pmn(double a, double b, double d2) {
  const double d = std::sqrt(d2);
  PMNPoint p{a, b, d, {}};
  p.residuals.sphere = a * a + b * b + 2.0 * d2 - 10.0;
  p.residuals.linear = 0.0;  // c = d is the canonical representative
  p.residuals.constant = constant_term({a, b, d, d});
  return p;
}

// Real roots of the hyperbola/circle quartic, Newton-polished and deduplicated.
std::vector<double> hyperbola_circle_roots(double d2) {
  const double coeffs[5] = {1.0, 2.0, 2.0 * d2, -6.0 * d2, d2 * d2};
  std::vector<double> roots;
  for (const Complex& z : polynomial_roots(coeffs)) {
    if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z))) continue;
    double x = z.real();
    for (int it = 0; it < 8; ++it) {
      const double slope = hyperbola_circle_slope(x, d2);
      if (slope == 0.0) break;
      const double step = hyperbola_circle_poly(x, d2) / slope;
      x -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
    if (x == 0.0) continue;  // asymptote, not a finite point
    const bool duplicate = std::any_of(roots.begin(), roots.end(), [&](double r) {
      return std::abs(r - x) <= 1e-9 * (1.0 + std::abs(x));
    });
    if (!duplicate) roots.push_back(x);
  }
  return roots;
}

// Minimum of the quartic over real x, attained at a real critical point.
double hyperbola_circle_min(double d2) {
  const double cubic[4] = {4.0, 6.0, 4.0 * d2, -6.0 * d2};
  double best = hyperbola_circle_poly(0.0, d2);
  for (const Complex& z : polynomial_roots(cubic)) {
    if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z))) continue;
    best = std::min(best, hyperbola_circle_poly(z.real(), d2));
  }
  return best;
}

}  // namespace

DomainVerdict in_domain(double a, double b, double d, double tol) {
  require_finite({a, b, d}, "in_domain");
  if (!(tol > 0.0)) throw std::invalid_argument("quasih: tolerance must be positive");
  const auto [A, B] = reduced_AB(a, b, d);
  DomainVerdict v;
  v.A = A;
  v.B = B;
  v.margin = std::min({A, A * A - B, B});
  v.inside = v.margin >= -tol;
  v.on_boundary = std::abs(v.margin) <= tol;
  return v;
}

bool in_domain_rotated(double sigma, double delta, double d) {
  require_finite({sigma, delta, d}, "in_domain_rotated");
  const double lhs = 8.0 + sigma * delta;
  return lhs * lhs >= 4.0 * d * d * (16.0 - sigma * sigma);
}

SectorSigns hyperbola_sector(double a, double b, double d) {
  const auto hyp = hyperbola_factors(a, b);
  const double d2 = d * d;
  return {sign_of(d2 - hyp.alpha_hyp), sign_of(d2 - hyp.beta_hyp)};
}

std::vector<PMNPoint> pmn_points(double d2) {
  require_d2(d2);
  std::vector<PMNPoint> points;
  for (double x : hyperbola_circle_roots(d2)) {
    const double a = 1.0 + x;
    const double b = -3.0 + d2 / x;
    points.push_back(make_pmn(a, b, d2));
    // (a, b) -> (-a, -b) swaps the two hyperbolas.
    points.push_back(make_pmn(-a, -b, d2));
  }
  std::sort(points.begin(), points.end(), [](const PMNPoint& p, const PMNPoint& q) {
    return std::atan2(p.b, p.a) < std::atan2(q.b, q.a);
  });
  return points;
}

Interval pmn_interval() {
  // Intersections exist while the quartic dips to zero; at d2 = 3 the point
  // (2, 0) is a known intersection, and none survive close to d2 = 5.
  double lo = 3.0;
  double hi = 5.0 - 1e-9;
  if (hyperbola_circle_min(lo) > 0.0 || hyperbola_circle_min(hi) <= 0.0) {
    throw NumericalError("quasih: failed to bracket the PMN interval end");
  }
  for (int i = 0; i < kMaxBisectionSteps && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (hyperbola_circle_min(mid) <= 0.0 ? lo : hi) = mid;
  }
  return {0.0, lo};
}

BoundaryHit boundary_trace_ray(Vec2 center, Vec2 direction, double d, double tol,
                               double max_length) {
  require_finite({center.x, center.y, direction.x, direction.y, d, max_length},
                 "boundary_trace_ray");
  if (!(tol > 0.0)) throw std::invalid_argument("quasih: tolerance must be positive");
  const double norm = std::hypot(direction.x, direction.y);
  if (norm == 0.0) throw std::invalid_argument("quasih: zero ray direction");
  const Vec2 u{direction.x / norm, direction.y / norm};
  auto margin = [&](double s) { return margin_at(center.x + s * u.x, center.y + s * u.y, d); };

  const double m0 = margin(0.0);
  if (m0 < -tol) {
    throw std::invalid_argument("quasih: ray center lies outside the domain");
  }
  if (m0 < 0.0) return {center, m0, 0};

  constexpr double kStep = 1e-3;
  double lo = 0.0;
  double hi = -1.0;
  for (double s = kStep; s <= max_length + 0.5 * kStep; s += kStep) {
    if (margin(s) < 0.0) {
      hi = s;
      break;
    }
    lo = s;
  }
  if (hi < 0.0) {
    throw NumericalError("quasih: no boundary crossing within ray length");
  }

  int steps = 0;
  while (steps < kMaxBisectionSteps && hi - lo > 1e-15 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (margin(mid) >= 0.0 ? lo : hi) = mid;
    ++steps;
  }
  const double m = margin(lo);
  if (std::abs(m) > tol) {
    throw NumericalError("quasih: bisection ended with margin above tolerance");
  }
  return {{center.x + lo * u.x, center.y + lo * u.y}, m, steps};
}

BoundaryCurve trace_boundary(Vec2 center, double d, std::size_t rays, double tol) {
  if (rays == 0) throw std::invalid_argument("quasih: need at least one ray");
  BoundaryCurve curve;
  curve.d2 = d * d;
  for (std::size_t k = 0; k < rays; ++k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(rays);
    try {
      const auto hit = boundary_trace_ray(center, {std::cos(phi), std::sin(phi)}, d, tol);
      curve.points.push_back(hit.point);
      curve.residuals.push_back(std::abs(hit.margin));
    } catch (const NumericalError&) {
      // Unbounded or grazing direction; leave a gap in the polyline.
    }
  }
  return curve;
}

namespace {

std::vector<double> lattice(Range r, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = (n == 1) ? r.lo
                    : r.lo + (r.hi - r.lo) * static_cast<double>(i) /
                                 static_cast<double>(n - 1);
  }
  return v;
}

}  // namespace

DomainGrid scan_grid(Range a_range, Range b_range, double d, GridShape shape,
                     double tol, unsigned threads) {
  if (shape.na == 0 || shape.nb == 0) {
    throw std::invalid_argument("quasih: scan grid must have positive resolution");
  }
  require_finite({a_range.lo, a_range.hi, b_range.lo, b_range.hi, d}, "scan_grid");

  DomainGrid grid;
  grid.a_values = lattice(a_range, shape.na);
  grid.b_values = lattice(b_range, shape.nb);
  grid.d = d;
  grid.verdicts.resize(shape.na * shape.nb);
  grid.sectors.resize(shape.na * shape.nb);

  std::atomic<std::size_t> next_row{0};
  auto worker = [&] {
    for (std::size_t ia = next_row++; ia < shape.na; ia = next_row++) {
      for (std::size_t ib = 0; ib < shape.nb; ++ib) {
        const double a = grid.a_values[ia];
        const double b = grid.b_values[ib];
        grid.verdicts[ia * shape.nb + ib] = in_domain(a, b, d, tol);
        grid.sectors[ia * shape.nb + ib] = hyperbola_sector(a, b, d);
      }
    }
  };

  const unsigned n_workers =
      std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(shape.na));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  return grid;
}

Figure1Geometry figure1_geometry(double d2, std::size_t samples, double extent) {
  require_d2(d2);
  if (samples < 2) throw std::invalid_argument("quasih: need at least two samples");
  if (!(extent > 3.0)) throw std::invalid_argument("quasih: extent must exceed 3");

  Figure1Geometry g;
  g.d2 = d2;
  g.circle_radius = std::sqrt(10.0 - 2.0 * d2);
  for (std::size_t k = 0; k <= samples; ++k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(samples);
    g.circle.push_back({g.circle_radius * std::cos(phi), g.circle_radius * std::sin(phi)});
  }

  // d2 = (b + 3)(a - 1): a = 1 + x, b = -3 + d2 / x, sampled geometrically in
  // |x| so the curve is resolved near its centre.
  auto branch = [&](double x_from, double x_to) {
    std::vector<Vec2> pts;
    const double ratio = std::log(x_to / x_from);
    for (std::size_t k = 0; k < samples; ++k) {
      const double x = x_from * std::exp(ratio * static_cast<double>(k) /
                                         static_cast<double>(samples - 1));
      pts.push_back({1.0 + x, -3.0 + d2 / x});
    }
    return pts;
  };
  Hyperbola& alpha = g.hyperbolas[0];
  alpha.center = {1.0, -3.0};
  alpha.branches.push_back(branch(d2 / (extent + 3.0), extent - 1.0));
  alpha.branches.push_back(branch(-(extent + 1.0), -d2 / (extent - 3.0)));

  Hyperbola& beta = g.hyperbolas[1];
  beta.center = {-1.0, 3.0};
  for (const auto& br : alpha.branches) {
    std::vector<Vec2> mirrored;
    for (const auto& p : br) mirrored.push_back({-p.x, -p.y});
    beta.branches.push_back(std::move(mirrored));
  }

  g.intersections = pmn_points(d2);
  return g;
}

}  // namespace quasih
