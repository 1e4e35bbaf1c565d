#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "quasih/model.hpp"

namespace quasih {

/// Relative singular-value cut used to decide the nullspace.
inline constexpr double kRankTol = 1e-10;

/// Largest Hamiltonian accepted by metric_nullspace.
inline constexpr Eigen::Index kMaxMetricDim = 16;

/// All real symmetric solutions Theta of H^T Theta = Theta H.
///
/// For real H the Hermitian-conjugate condition reduces to the transpose,
/// and we only look for real symmetric Theta; the basis is orthonormal in
/// the Frobenius inner product. `defective` is set when the eigenvector
/// matrix of H is numerically singular (an exceptional point), in which
/// case the family contains no positive-definite member.
struct MetricFamily {
  RealMatrix hamiltonian;
  std::size_t dim = 0;
  std::vector<RealMatrix> basis;
  double residual = 0.0;  ///< max relative operator residual over the basis
  std::vector<double> singular_values;
  bool defective = false;
};

MetricFamily metric_nullspace(const RealMatrix& h, double rank_tol = kRankTol);

/// ||H^T Theta - Theta H||_max / (||H||_max ||Theta||_max).
double quasi_hermiticity_residual(const RealMatrix& h, const RealMatrix& theta);

/// Four-parameter metric of the band model build_alpha(alpha) with
/// Theta_22 = p, Theta_44 = q, Theta_13 = r, Theta_24 = s. Throws
/// std::invalid_argument for alpha == 0 (the closed form divides by alpha).
RealMatrix closed_form_band_metric(BandParam alpha, double p, double q, double r,
                                   double s);

struct SpanProjection {
  Eigen::VectorXd coefficients;
  double residual = 0.0;  ///< ||theta - projection||_F / ||theta||_F
};

SpanProjection project_onto_family(const MetricFamily& fam, const RealMatrix& theta);

enum class PositivityStrategy { EigenDyads, RandomSearch };

/// Best element of a metric family, scaled to unit largest |eigenvalue|.
struct PositivityCertificate {
  Eigen::VectorXd coefficients;  ///< weights over fam.basis
  RealMatrix theta;
  double min_eigenvalue = 0.0;
  bool positive = false;
  PositivityStrategy strategy = PositivityStrategy::RandomSearch;
};

/// Searches span(fam.basis) for a positive-definite metric. With a real,
/// non-degenerate spectrum the start point is the sum of left-eigenvector
/// dyads; otherwise a seeded random search over the coefficients. Either
/// way the result is refined to maximise min/max eigenvalue.
PositivityCertificate find_positive(const MetricFamily& fam);

struct ProfilePoint {
  double alpha = 0.0;
  std::optional<double> min_eigenvalue;  ///< empty at the exceptional point
  bool exceptional = false;
};

/// Normalised best min-eigenvalue of the band-model metric for each alpha in
/// (0, sqrt(2/5)]. The exceptional endpoint is flagged, not evaluated.
std::vector<ProfilePoint> boundary_degeneracy_profile(std::span<const BandParam> alphas);

}  // namespace quasih
