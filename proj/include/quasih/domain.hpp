#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace quasih {

/// Default tolerance on the domain margin, and cap on bisection steps.
inline constexpr double kBoundaryTol = 1e-9;
inline constexpr int kMaxBisectionSteps = 200;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Membership of (a, b, d) (with c^2 = d^2) in the closed domain
/// A >= 0, A^2 >= B >= 0. `margin` is min(A, A^2 - B, B); the open-set
/// convention is recovered as inside && !on_boundary.
struct DomainVerdict {
  bool inside = false;
  double A = 0.0;
  double B = 0.0;
  double margin = 0.0;
  bool on_boundary = false;
};

DomainVerdict in_domain(double a, double b, double d, double tol = kBoundaryTol);

/// A^2 >= B expressed in sigma = a + b, delta = a - b:
///   (8 + sigma delta)^2 >= 4 d^2 (16 - sigma^2).
bool in_domain_rotated(double sigma, double delta, double d);

/// Which side of each hyperbola d^2 = alpha_hyp, d^2 = beta_hyp a point lies
/// on: sign(d^2 - alpha_hyp) and sign(d^2 - beta_hyp), each in {-1, 0, 1}.
struct SectorSigns {
  int alpha_side = 0;
  int beta_side = 0;
};
SectorSigns hyperbola_sector(double a, double b, double d);

struct PMNResiduals {
  double sphere = 0.0;    ///< a^2 + b^2 + c^2 + d^2 - 10
  double linear = 0.0;    ///< 4 (c^2 - d^2)
  double constant = 0.0;  ///< C(a, b, d, d)
};

/// Point of maximal non-Hermiticity: all four energies merge at 0.
struct PMNPoint {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  PMNResiduals residuals;
};

/// All (a, b) on the circle a^2 + b^2 = 10 - 2 d2 that also lie on one of
/// the hyperbolas d2 = (b+3)(a-1), d2 = (b-3)(a+1). Points come in mirror
/// pairs (a, b), (-a, -b) and are ordered by polar angle. Requires
/// 0 < d2 < 5.
std::vector<PMNPoint> pmn_points(double d2);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// The d^2 range over which pmn_points is non-empty, located numerically.
/// The lower end is the open limit 0.
Interval pmn_interval();

struct BoundaryHit {
  Vec2 point;
  double margin = 0.0;
  int bisection_steps = 0;
};

/// Walks from `center` (which must be inside the domain) along `direction`
/// until the margin changes sign, then bisects. Throws NumericalError when
/// no sign change occurs within `max_length`.
BoundaryHit boundary_trace_ray(Vec2 center, Vec2 direction, double d,
                               double tol = kBoundaryTol, double max_length = 10.0);

struct BoundaryCurve {
  std::vector<Vec2> points;  ///< (a, b) pairs in ray order
  double d2 = 0.0;           ///< frozen parameter
  std::vector<double> residuals;
};

/// Star-shaped trace: one boundary_trace_ray per equally spaced direction.
/// Rays without a sign change are skipped.
BoundaryCurve trace_boundary(Vec2 center, double d, std::size_t rays,
                             double tol = kBoundaryTol);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct GridShape {
  std::size_t na = 0;
  std::size_t nb = 0;
};

/// Verdicts on an na x nb lattice, row-major in a (index ia * nb + ib).
struct DomainGrid {
  std::vector<double> a_values;
  std::vector<double> b_values;
  double d = 0.0;
  std::vector<DomainVerdict> verdicts;
  std::vector<SectorSigns> sectors;

  const DomainVerdict& at(std::size_t ia, std::size_t ib) const {
    return verdicts[ia * b_values.size() + ib];
  }
};

/// Evaluates in_domain on an inclusive lattice over the two ranges. A single
/// sample along an axis sits at the range's lower end. Output is identical
/// for any thread count.
DomainGrid scan_grid(Range a_range, Range b_range, double d, GridShape shape,
                     double tol = kBoundaryTol, unsigned threads = 1);

struct Hyperbola {
  Vec2 center;
  std::vector<std::vector<Vec2>> branches;
};

struct Figure1Geometry {
  double d2 = 0.0;
  double circle_radius = 0.0;
  std::vector<Vec2> circle;
  std::array<Hyperbola, 2> hyperbolas;  ///< d^2 = alpha_hyp, then d^2 = beta_hyp
  std::vector<PMNPoint> intersections;
};

/// Circle, both hyperbolas (clipped to |a|, |b| <= extent) and their
/// intersections at fixed d^2.
Figure1Geometry figure1_geometry(double d2, std::size_t samples = 256,
                                 double extent = 5.0);

}  // namespace quasih
