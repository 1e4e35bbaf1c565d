#include "quasih/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quasih {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("quasih: non-finite ") + what);
  }
}

void require_finite(const ParamPoint& p) {
  require_finite(p.a, "coupling a");
  require_finite(p.b, "coupling b");
  require_finite(p.c, "coupling c");
  require_finite(p.d, "coupling d");
}

}  // namespace

RealMatrix build_two_state(double b) {
  require_finite(b, "coupling b");
  RealMatrix h(2, 2);
  h << -1.0, b,
       -b, 1.0;
  return h;
}

RealMatrix build_full(const ParamPoint& p) {
  require_finite(p);
  RealMatrix coupling(2, 2);
  coupling << p.c, p.b,
              p.a, p.d;
  return build_partitioned(coupling);
}

RealMatrix reorder_permutation() {
  RealMatrix perm = RealMatrix::Zero(4, 4);
  perm(0, 0) = 1.0;
  perm(1, 2) = 1.0;
  perm(2, 1) = 1.0;
  perm(3, 3) = 1.0;
  return perm;
}

RealMatrix build_reordered(const ParamPoint& p) {
  // Permuting indices is exact, so do it by index rather than by product.
  const RealMatrix full = build_full(p);
  constexpr int order[4] = {0, 2, 1, 3};
  RealMatrix h(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      h(i, j) = full(order[i], order[j]);
    }
  }
  return h;
}

RealMatrix build_band(double a, double c) {
  return build_reordered(band_point(a, c));
}

RealMatrix build_alpha(BandParam alpha) {
  require_finite(alpha.alpha, "band coupling alpha");
  return build_band(-2.0 * alpha.alpha, 2.0 * alpha.alpha);
}

ParamPoint band_point(double a, double c) {
  return ParamPoint{a, 0.0, c, c};
}

ParamPoint alpha_point(BandParam alpha) {
  return band_point(-2.0 * alpha.alpha, 2.0 * alpha.alpha);
}

RealMatrix harmonic_diag(std::size_t n_plus, std::size_t n_minus,
                         EnergyOrigin origin) {
  const std::size_t n = n_plus + n_minus;
  if (n == 0) {
    throw std::invalid_argument("quasih: harmonic_diag needs at least one state");
  }
  Eigen::VectorXd levels(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n_plus; ++k) {
    levels(static_cast<Eigen::Index>(k)) = 4.0 * static_cast<double>(k) + 1.0;
  }
  for (std::size_t k = 0; k < n_minus; ++k) {
    levels(static_cast<Eigen::Index>(n_plus + k)) =
        4.0 * static_cast<double>(k) + 3.0;
  }
  if (origin == EnergyOrigin::Shifted) {
    const double centre = 0.5 * (levels.minCoeff() + levels.maxCoeff());
    levels.array() -= centre;
  }
  return levels.asDiagonal();
}

RealMatrix build_partitioned(const RealMatrix& coupling, EnergyOrigin origin) {
  if (!coupling.allFinite()) {
    throw std::invalid_argument("quasih: non-finite coupling block");
  }
  const auto n_plus = static_cast<std::size_t>(coupling.rows());
  const auto n_minus = static_cast<std::size_t>(coupling.cols());
  RealMatrix h = harmonic_diag(n_plus, n_minus, origin);
  const auto np = coupling.rows();
  const auto nm = coupling.cols();
  h.topRightCorner(np, nm) = coupling;
  h.bottomLeftCorner(nm, np) = -coupling.transpose();
  return h;
}

}  // namespace quasih
