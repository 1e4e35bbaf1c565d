#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "oracles.hpp"
#include "quasih/domain.hpp"
#include "quasih/errors.hpp"
#include "quasih/model.hpp"
#include "quasih/secular.hpp"
#include "quasih/spectrum.hpp"

using namespace quasih;

TEST_CASE("membership at reference points") {
  const auto origin = in_domain(0, 0, 0);
  CHECK(origin.inside);
  CHECK(origin.A == 5.0);
  CHECK(origin.B == 9.0);
  CHECK(origin.margin == 5.0);
  CHECK_FALSE(origin.on_boundary);

  const auto pmn = in_domain(2, 0, std::sqrt(3.0));
  CHECK(pmn.inside);
  CHECK(pmn.on_boundary);
  CHECK(std::abs(pmn.A) <= 1e-12);
  CHECK(std::abs(pmn.B) <= 1e-12);

  const auto far = in_domain(0, 0, 3);
  CHECK_FALSE(far.inside);
  CHECK(far.A == -4.0);
  CHECK(closed_form_energies(0, 0, 3).classification == Reality::ComplexPairs);
}

TEST_CASE("rotated coordinates") {
  for (double d : {0.0, 0.5, 0.99, 1.0, 1.01, 2.0}) {
    CHECK(in_domain_rotated(0, 0, d) == (d * d <= 1.0));
  }
  oracle::Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    const double s = rng.uniform(4, 10) * (k % 2 ? 1 : -1);
    CHECK(in_domain_rotated(s, rng.uniform(-10, 10), rng.uniform(-10, 10)));
  }
  int compared = 0;
  for (int k = 0; k < 20000; ++k) {
    const double a = rng.uniform(-4, 4), b = rng.uniform(-4, 4), d = rng.uniform(-4, 4);
    const auto ab = reduced_AB(a, b, d);
    const double slack = ab.A * ab.A - ab.B;
    if (std::abs(slack) <= 1e-12 * (1 + ab.A * ab.A + std::abs(ab.B))) continue;
    CHECK(in_domain_rotated(a + b, a - b, d) == (slack >= 0));
    ++compared;
  }
  CHECK(compared > 19000);
}

TEST_CASE("sectors follow the hyperbola factors") {
  const auto s = hyperbola_sector(0, 0, 1);
  // alpha_hyp(0,0) = -3, beta_hyp(0,0) = -3, d^2 = 1 above both.
  CHECK(s.alpha_side == 1);
  CHECK(s.beta_side == 1);
  const auto t = hyperbola_sector(3, 2, 1);  // alpha_hyp = 10
  CHECK(t.alpha_side == -1);
}

TEST_CASE("PMN points at d^2 = 1.6") {
  const auto pts = pmn_points(1.6);
  REQUIRE(pts.size() == 4);
  for (const auto& p : pts) {
    CHECK(std::abs(p.a * p.a + p.b * p.b + 2 * p.d * p.d - 10) <= 1e-9);
    CHECK(std::abs(oracle::constant_term(p.a, p.b, p.d, p.d)) <= 1e-9);
    CHECK(p.d * p.d == doctest::Approx(1.6).epsilon(1e-15));
    CHECK(std::abs(p.residuals.sphere) <= 1e-9);
    CHECK(std::abs(p.residuals.constant) <= 1e-9);
    const auto v = in_domain(p.a, p.b, p.d);
    CHECK(std::abs(v.A) <= 1e-9);
    CHECK(std::abs(v.B) <= 1e-9);
  }
}

TEST_CASE("PMN points contain the b = 0 vertex at d^2 = 3") {
  const auto pts = pmn_points(3.0);
  bool plus = false, minus = false;
  for (const auto& p : pts) {
    if (std::abs(p.b) < 1e-9 && std::abs(p.a - 2) < 1e-9) plus = true;
    if (std::abs(p.b) < 1e-9 && std::abs(p.a + 2) < 1e-9) minus = true;
  }
  CHECK(plus);
  CHECK(minus);
  CHECK(std::abs(oracle::constant_term(2, 0, std::sqrt(3.0), std::sqrt(3.0))) < 1e-12);
}

TEST_CASE("PMN counts agree with a dense scan of the circle") {
  for (double d2 : {0.05, 0.1, 0.5, 1.0, 1.6, 2.2, 2.9, 3.05, 3.5, 4.2, 4.9}) {
    const double r = std::sqrt(10 - 2 * d2);
    const double d = std::sqrt(d2);
    const int changes = oracle::sign_changes_on_circle(
        r, [&](double a, double b) { return oracle::constant_term(a, b, d, d); });
    const auto pts = pmn_points(d2);
    CAPTURE(d2);
    CHECK(static_cast<int>(pts.size()) == changes);
    CHECK(pts.size() % 2 == 0);
    for (const auto& p : pts) {
      bool mirrored = false;
      for (const auto& q : pts) {
        if (std::abs(q.a + p.a) < 1e-9 && std::abs(q.b + p.b) < 1e-9) mirrored = true;
      }
      CHECK(mirrored);
    }
  }
  CHECK(pmn_points(4.9).empty());
  CHECK_THROWS_AS(pmn_points(0.0), std::invalid_argument);
  CHECK_THROWS_AS(pmn_points(5.0), std::invalid_argument);
}

TEST_CASE("PMN points carry a near-nilpotent spectrum") {
  for (const auto& p : pmn_points(1.6)) {
    const auto s = secular_coeffs({p.a, p.b, p.d, p.d});
    CHECK(std::abs(s.e2) <= 1e-9);
    CHECK(std::abs(s.e0) <= 1e-9);
    // A rounding perturbation of size eps splits a fourfold root by about eps^(1/4).
    const Spectrum e = numeric_energies(build_reordered({p.a, p.b, p.d, p.d}));
    for (const auto& z : e.energies) CHECK(std::abs(z) <= 1e-3);
  }
}

TEST_CASE("PMN interval of d^2") {
  const Interval iv = pmn_interval();
  CHECK(iv.lo == 0.0);
  CHECK(iv.hi > 3.0);
  CHECK(iv.hi < 3.2);
  CHECK_FALSE(pmn_points(iv.hi - 1e-6).empty());
  CHECK(pmn_points(iv.hi + 1e-4).empty());
}

TEST_CASE("ray bisection") {
  const auto hit = boundary_trace_ray({0, 0}, {1, 0}, 0.0);
  CHECK(hit.point.x == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(hit.point.y == 0.0);
  CHECK(std::abs(hit.margin) <= kBoundaryTol);
  CHECK(hit.bisection_steps <= kMaxBisectionSteps);

  // Towards a PMN vertex. The domain is cusped there, so the ray leaves it
  // slightly before reaching the vertex.
  const double d = std::sqrt(1.6);
  const Vec2 center{1.45, -0.275};
  REQUIRE(in_domain(center.x, center.y, d).inside);
  int hits = 0;
  for (const auto& p : pmn_points(1.6)) {
    if (p.a < 1.0 || p.b < 1.0) continue;
    const Vec2 dir{p.a - center.x, p.b - center.y};
    const auto h = boundary_trace_ray(center, dir, d);
    const double gap = std::hypot(h.point.x - p.a, h.point.y - p.b);
    CHECK(gap < 2e-3);
    CHECK(std::abs(in_domain(h.point.x, h.point.y, d).margin) <= kBoundaryTol);
    const double len = std::hypot(dir.x, dir.y);
    const double beyond = 1e-6 / len;
    CHECK(in_domain(h.point.x + beyond * dir.x, h.point.y + beyond * dir.y, d).margin < 0.0);
    ++hits;
  }
  CHECK(hits == 1);

  CHECK_THROWS_AS(boundary_trace_ray({0, 0}, {1, 0}, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(boundary_trace_ray({0, 0}, {2, 0}, std::sqrt(3.0)), std::invalid_argument);
  CHECK_THROWS_AS(boundary_trace_ray({0, 0}, {0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(boundary_trace_ray({0, 0}, {1, 0}, 0.0, kBoundaryTol, 0.5), NumericalError);
}

TEST_CASE("traced boundary") {
  const auto curve = trace_boundary({0, 0}, 0.0, 64);
  CHECK(curve.points.size() == 64);
  CHECK(curve.d2 == 0.0);
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    const auto v = in_domain(curve.points[k].x, curve.points[k].y, 0.0);
    CHECK(std::abs(v.margin) <= kBoundaryTol);
    CHECK(curve.residuals[k] <= kBoundaryTol);
  }
}

TEST_CASE("grid scan") {
  const auto small = scan_grid({-0.1, 0.1}, {-0.1, 0.1}, 0.0, {3, 3});
  CHECK(small.verdicts.size() == 9);
  for (const auto& v : small.verdicts) CHECK(v.inside);
  CHECK(small.a_values == std::vector<double>{-0.1, 0.0, 0.1});

  const auto one = scan_grid({0.3, 0.3}, {-0.2, -0.2}, 1.0, {1, 1});
  const auto ref = in_domain(0.3, -0.2, 1.0);
  CHECK(one.at(0, 0).margin == ref.margin);
  CHECK(one.at(0, 0).inside == ref.inside);

  const double d = std::sqrt(1.6);
  const auto grid = scan_grid({-4, 4}, {-4, 4}, d, {81, 81}, kBoundaryTol, 1);
  std::size_t inside = 0;
  for (std::size_t ia = 0; ia < 81; ++ia) {
    for (std::size_t ib = 0; ib < 81; ++ib) {
      const auto& v = grid.at(ia, ib);
      if (!v.inside) continue;
      ++inside;
      const double a = grid.a_values[ia], b = grid.b_values[ib];
      CHECK(a * a + b * b <= 6.8 + 1e-9);
      CHECK(v.B >= -kBoundaryTol);
    }
  }
  CHECK(inside > 0);
  CHECK(inside < 81 * 81);

  const auto par = scan_grid({-4, 4}, {-4, 4}, d, {81, 81}, kBoundaryTol, 4);
  for (std::size_t k = 0; k < grid.verdicts.size(); ++k) {
    CHECK(par.verdicts[k].margin == grid.verdicts[k].margin);
  }
  CHECK_THROWS_AS(scan_grid({0, 1}, {0, 1}, 0.0, {0, 4}), std::invalid_argument);
}

TEST_CASE("figure geometry") {
  const auto g = figure1_geometry(1.6);
  CHECK(g.circle_radius == doctest::Approx(std::sqrt(6.8)).epsilon(1e-15));
  for (const auto& p : g.circle) {
    CHECK(std::abs(std::hypot(p.x, p.y) - g.circle_radius) < 1e-12);
  }
  CHECK(g.hyperbolas[0].center.x == 1.0);
  CHECK(g.hyperbolas[0].center.y == -3.0);
  CHECK(g.hyperbolas[1].center.x == -1.0);
  CHECK(g.hyperbolas[1].center.y == 3.0);
  for (const auto& br : g.hyperbolas[0].branches) {
    REQUIRE(br.size() >= 2);
    for (const auto& p : br) CHECK((p.y + 3) * (p.x - 1) == doctest::Approx(1.6).epsilon(1e-12));
  }
  for (const auto& br : g.hyperbolas[1].branches) {
    for (const auto& p : br) CHECK((p.y - 3) * (p.x + 1) == doctest::Approx(1.6).epsilon(1e-12));
  }
  REQUIRE(g.intersections.size() == 4);
  for (const auto& p : g.intersections) {
    const auto f = hyperbola_factors(p.a, p.b);
    CHECK(std::min(std::abs(1.6 - f.alpha_hyp), std::abs(1.6 - f.beta_hyp)) <= 1e-9);
    CHECK(std::abs(std::hypot(p.a, p.b) - g.circle_radius) <= 1e-9);
  }
  CHECK_THROWS_AS(figure1_geometry(5.5), std::invalid_argument);
}
