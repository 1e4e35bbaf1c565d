#include "quasih/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "quasih/spectrum.hpp"

namespace quasih {

namespace {

constexpr double kPositivityFloor = 1e-12;
constexpr double kDefectiveCond = 1e6;
constexpr int kRandomSamples = 10000;
constexpr std::uint64_t kSearchSeed = 0x5eed'0f'7e7aULL;

// Frobenius-orthonormal basis of symmetric n x n matrices.
std::vector<std::pair<Eigen::Index, Eigen::Index>> packed_pairs(Eigen::Index n) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

RealMatrix unit_symmetric(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  RealMatrix e = RealMatrix::Zero(n, n);
  if (i == j) {
    e(i, i) = 1.0;
  } else {
    e(i, j) = e(j, i) = 1.0 / std::sqrt(2.0);
  }
  return e;
}

Eigen::VectorXd symmetric_eigenvalues(const RealMatrix& theta) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(theta, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// min eigenvalue over largest |eigenvalue|; 1 for a multiple of the identity.
double normalised_min(const RealMatrix& theta) {
  const Eigen::VectorXd ev = symmetric_eigenvalues(theta);
  const double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) return -1.0;
  return ev.minCoeff() / scale;
}

RealMatrix combine(const std::vector<RealMatrix>& basis, const Eigen::VectorXd& c) {
  RealMatrix theta = RealMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    theta += c(static_cast<Eigen::Index>(k)) * basis[k];
  }
  return theta;
}

// Coordinate pattern search maximising objective(x), step halving to 1e-7.
template <class Objective>
double pattern_search(Eigen::VectorXd& x, double initial_step, Objective&& objective) {
  double best = objective(x);
  for (double step = initial_step; step > 1e-7; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        for (double sign : {1.0, -1.0}) {
          Eigen::VectorXd trial = x;
          trial(k) += sign * step;
          const double value = objective(trial);
          if (value > best) {
            best = value;
            x = std::move(trial);
            improved = true;
          }
        }
      }
    }
  }
  return best;
}

PositivityCertificate finish(const MetricFamily& fam, RealMatrix theta,
                             PositivityStrategy strategy) {
  const Eigen::VectorXd ev = symmetric_eigenvalues(theta);
  const double scale = ev.cwiseAbs().maxCoeff();
  if (scale > 0.0) theta /= scale;

  PositivityCertificate cert;
  cert.coefficients = project_onto_family(fam, theta).coefficients;
  cert.min_eigenvalue = symmetric_eigenvalues(theta).minCoeff();
  cert.theta = std::move(theta);
  cert.positive = cert.min_eigenvalue > kPositivityFloor;
  cert.strategy = strategy;
  return cert;
}

std::optional<PositivityCertificate> dyad_candidate(const MetricFamily& fam) {
  const RealMatrix& h = fam.hamiltonian;
  if (fam.dim != static_cast<std::size_t>(h.rows())) return std::nullopt;
  if (numeric_energies(h).classification != Reality::AllReal) return std::nullopt;

  Eigen::EigenSolver<RealMatrix> es(h.transpose());
  if (es.info() != Eigen::Success) return std::nullopt;
  RealMatrix left = es.eigenvectors().real();
  left.colwise().normalize();

  // Theta(w) = sum_n exp(w_n) v_n v_n^T; w = 0 is the plain dyad sum.
  auto theta_of = [&](const Eigen::VectorXd& w) {
    return RealMatrix(left * w.array().exp().matrix().asDiagonal() * left.transpose());
  };
  Eigen::VectorXd w = Eigen::VectorXd::Zero(h.rows());
  pattern_search(w, 1.0, [&](const Eigen::VectorXd& x) { return normalised_min(theta_of(x)); });
  return finish(fam, theta_of(w), PositivityStrategy::EigenDyads);
}

PositivityCertificate random_candidate(const MetricFamily& fam) {
  const auto dim = static_cast<Eigen::Index>(fam.dim);
  std::mt19937_64 rng(kSearchSeed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto objective = [&](const Eigen::VectorXd& c) {
    return normalised_min(combine(fam.basis, c));
  };
  Eigen::VectorXd best = Eigen::VectorXd::Zero(dim);
  double best_value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd c(dim);
  for (int sample = 0; sample < kRandomSamples; ++sample) {
    for (Eigen::Index k = 0; k < dim; ++k) c(k) = gauss(rng);
    c.normalize();
    const double value = objective(c);
    if (value > best_value) {
      best_value = value;
      best = c;
    }
  }
  pattern_search(best, 0.25, objective);
  return finish(fam, combine(fam.basis, best), PositivityStrategy::RandomSearch);
}

}  // namespace

double quasi_hermiticity_residual(const RealMatrix& h, const RealMatrix& theta) {
  const double scale = h.cwiseAbs().maxCoeff() * theta.cwiseAbs().maxCoeff();
  const double raw = (h.transpose() * theta - theta * h).cwiseAbs().maxCoeff();
  return scale > 0.0 ? raw / scale : raw;
}

MetricFamily metric_nullspace(const RealMatrix& h, double rank_tol) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("quasih: metric_nullspace needs a non-empty square matrix");
  }
  if (h.rows() > kMaxMetricDim) {
    throw std::invalid_argument("quasih: metric_nullspace limited to n <= " +
                                std::to_string(kMaxMetricDim));
  }
  if (!h.allFinite()) throw std::invalid_argument("quasih: matrix has non-finite entries");
  if (!(rank_tol > 0.0)) throw std::invalid_argument("quasih: rank tolerance must be positive");

  const Eigen::Index n = h.rows();
  const auto pairs = packed_pairs(n);
  const auto m = static_cast<Eigen::Index>(pairs.size());

  // Column k is vec(H^T S_k - S_k H) for the k-th symmetric unit matrix S_k.
  RealMatrix op(n * n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const RealMatrix s = unit_symmetric(n, pairs[k].first, pairs[k].second);
    const RealMatrix image = h.transpose() * s - s * h;
    op.col(k) = Eigen::Map<const Eigen::VectorXd>(image.data(), n * n);
  }

  Eigen::JacobiSVD<RealMatrix> svd(op, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();

  MetricFamily fam;
  fam.hamiltonian = h;
  fam.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cut = rank_tol * (sv.size() > 0 ? sv(0) : 0.0);
  for (Eigen::Index k = 0; k < m; ++k) {
    const bool null_direction = (k >= sv.size()) || sv(k) <= cut;
    if (!null_direction) continue;
    RealMatrix theta = RealMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < m; ++j) {
      theta += svd.matrixV()(j, k) * unit_symmetric(n, pairs[j].first, pairs[j].second);
    }
    fam.residual = std::max(fam.residual, quasi_hermiticity_residual(h, theta));
    fam.basis.push_back(std::move(theta));
  }
  fam.dim = fam.basis.size();

  Eigen::EigenSolver<RealMatrix> es(h);
  if (es.info() == Eigen::Success) {
    Eigen::MatrixXcd vecs = es.eigenvectors();
    vecs.colwise().normalize();
    Eigen::JacobiSVD<Eigen::MatrixXcd> vsvd(vecs);
    const auto& vs = vsvd.singularValues();
    const double smin = vs(vs.size() - 1);
    fam.defective = smin == 0.0 || vs(0) / smin > kDefectiveCond;
  } else {
    fam.defective = true;
  }
  return fam;
}

RealMatrix closed_form_band_metric(BandParam alpha, double p, double q, double r,
                                   double s) {
  const double x = alpha.alpha;
  if (!std::isfinite(x) || !std::isfinite(p) || !std::isfinite(q) || !std::isfinite(r) ||
      !std::isfinite(s)) {
    throw std::invalid_argument("quasih: non-finite input to closed_form_band_metric");
  }
  if (x == 0.0) {
    throw std::invalid_argument(
        "quasih: closed-form band metric undefined at alpha = 0; use metric_nullspace");
  }
  const double x2 = x * x;
  const double t11 = (-9.0 * p + 3.0 * q + 10.0 * r + s) / 6.0 + (2.0 * r - s) / x2;
  const double t12 = x * (3.0 * p - 3.0 * q - 4.0 * r - s) / 6.0 + (-2.0 * r + s) / x;
  const double t14 = -(r + s) * x / 3.0;
  const double t23 = x * (-3.0 * p + 3.0 * q + 2.0 * r - s) / 6.0 - s / x;
  // The s coefficient here is 7; with 1 the (2,3) and (3,4) conditions fail.
  const double t33 = (-3.0 * p - 3.0 * q + 4.0 * r + 7.0 * s) / 6.0 + s / x2;
  const double t34 = x * (3.0 * p - 3.0 * q - 4.0 * r - s) / 6.0 - s / x;

  RealMatrix theta(4, 4);
  theta << t11, t12, r,   t14,
           t12, p,   t23, s,
           r,   t23, t33, t34,
           t14, s,   t34, q;
  return theta;
}

SpanProjection project_onto_family(const MetricFamily& fam, const RealMatrix& theta) {
  if (fam.dim == 0) {
    return {Eigen::VectorXd(), theta.norm() > 0.0 ? 1.0 : 0.0};
  }
  const Eigen::Index nn = theta.size();
  RealMatrix q(nn, static_cast<Eigen::Index>(fam.dim));
  for (std::size_t k = 0; k < fam.dim; ++k) {
    q.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::VectorXd>(fam.basis[k].data(), nn);
  }
  const Eigen::Map<const Eigen::VectorXd> target(theta.data(), nn);
  SpanProjection out;
  out.coefficients = q.colPivHouseholderQr().solve(target);
  const double norm = target.norm();
  const double miss = (q * out.coefficients - target).norm();
  out.residual = norm > 0.0 ? miss / norm : miss;
  return out;
}

PositivityCertificate find_positive(const MetricFamily& fam) {
  if (fam.dim == 0) throw std::invalid_argument("quasih: empty metric family");
  if (auto dyads = dyad_candidate(fam); dyads && dyads->positive) {
    return *dyads;
  }
  return random_candidate(fam);
}

std::vector<ProfilePoint> boundary_degeneracy_profile(std::span<const BandParam> alphas) {
  constexpr double kCriticalSq = 0.4;
  std::vector<ProfilePoint> out;
  out.reserve(alphas.size());
  for (const BandParam& bp : alphas) {
    const double x2 = bp.alpha * bp.alpha;
    if (!(bp.alpha > 0.0) || x2 > kCriticalSq * (1.0 + 1e-12)) {
      throw std::invalid_argument("quasih: profile alpha must lie in (0, sqrt(2/5)]");
    }
    ProfilePoint pt;
    pt.alpha = bp.alpha;
    const MetricFamily fam = metric_nullspace(build_alpha(bp));
    pt.exceptional = std::abs(x2 - kCriticalSq) <= 1e-12 || fam.defective;
    if (!pt.exceptional) pt.min_eigenvalue = find_positive(fam).min_eigenvalue;
    out.push_back(pt);
  }
  return out;
}

}  // namespace quasih
