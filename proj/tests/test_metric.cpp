#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "quasih/metric.hpp"
#include "quasih/model.hpp"

using namespace quasih;

namespace {

double commutator_residual(const RealMatrix& h, const RealMatrix& theta) {
  return (h.transpose() * theta - theta * h).cwiseAbs().maxCoeff() /
         (h.cwiseAbs().maxCoeff() * theta.cwiseAbs().maxCoeff());
}

double min_eig(const RealMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<RealMatrix>(m).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("diagonal hamiltonian has the diagonal commutant") {
  RealMatrix h = RealMatrix::Zero(4, 4);
  h.diagonal() << -3, -1, 1, 3;
  const auto fam = metric_nullspace(h);
  CHECK(fam.dim == 4);
  CHECK_FALSE(fam.defective);
  for (const auto& b : fam.basis) {
    CHECK(b == b.transpose());
    RealMatrix off = b;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-12);
  }
  const auto cert = find_positive(fam);
  CHECK(cert.positive);
  CHECK(cert.min_eigenvalue > 0.0);
  CHECK(project_onto_family(fam, RealMatrix::Identity(4, 4)).residual < 1e-12);
}

TEST_CASE("band model family") {
  oracle::Rng rng(31);
  for (int k = 0; k < 10; ++k) {
    const double alpha = rng.uniform(0.05, 0.6);
    const RealMatrix h = build_alpha({alpha});
    const auto fam = metric_nullspace(h);
    CAPTURE(alpha);
    CHECK(fam.dim == 4);
    CHECK(fam.residual <= 1e-9);
    for (const auto& b : fam.basis) {
      CHECK(b == b.transpose());
      CHECK(commutator_residual(h, b) <= 1e-9);
      CHECK(quasi_hermiticity_residual(h, b) <= 1e-9);
    }
    for (int j = 0; j < 5; ++j) {
      const RealMatrix theta = closed_form_band_metric(
          {alpha}, rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
      CHECK(theta == theta.transpose());
      CHECK(commutator_residual(h, theta) <= 1e-10);
      CHECK(project_onto_family(fam, theta).residual <= 1e-9);
    }
  }
}

TEST_CASE("closed-form metric entries") {
  const RealMatrix t = closed_form_band_metric({0.5}, 1, 1, 0, 0);
  CHECK(t(0, 3) == 0.0);
  CHECK(t(0, 2) == 0.0);
  CHECK(t(1, 1) == 1.0);
  CHECK(t(3, 3) == 1.0);
  CHECK(commutator_residual(build_alpha({0.5}), t) <= 1e-12);

  const RealMatrix u = closed_form_band_metric({0.3}, 1, 1, 1, 1);
  CHECK(u(0, 2) == 1.0);
  CHECK(u(1, 3) == 1.0);
  CHECK(project_onto_family(metric_nullspace(build_alpha({0.3})), u).residual <= 1e-9);

  CHECK_THROWS_AS(closed_form_band_metric({0.0}, 1, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("dyads of left eigenvectors lie in the family") {
  const RealMatrix h = build_alpha({0.3});
  Eigen::EigenSolver<RealMatrix> es(h.transpose());
  RealMatrix theta = RealMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXd v = es.eigenvectors().col(k).real();
    theta += v * v.transpose();
  }
  CHECK(commutator_residual(h, theta) < 1e-12);
  CHECK(min_eig(theta) > 0.0);
  CHECK(project_onto_family(metric_nullspace(h), theta).residual < 1e-9);
}

TEST_CASE("positivity tracks the reality of the spectrum") {
  for (double alpha : {0.05, 0.3, 0.6, std::sqrt(0.399)}) {
    const auto cert = find_positive(metric_nullspace(build_alpha({alpha})));
    CAPTURE(alpha);
    CHECK(cert.positive);
    CHECK(cert.min_eigenvalue > 0.0);
    CHECK(min_eig(cert.theta) == doctest::Approx(cert.min_eigenvalue).epsilon(1e-9));
  }
  for (double alpha : {std::sqrt(0.401), 0.7, 1.0}) {
    const auto fam = metric_nullspace(build_alpha({alpha}));
    const auto cert = find_positive(fam);
    CAPTURE(alpha);
    CHECK_FALSE(cert.positive);
    CHECK(cert.strategy == PositivityStrategy::RandomSearch);
  }
}

TEST_CASE("search is reproducible") {
  const auto fam = metric_nullspace(build_alpha({0.8}));
  const auto x = find_positive(fam);
  const auto y = find_positive(fam);
  CHECK(x.min_eigenvalue == y.min_eigenvalue);
  CHECK(x.coefficients == y.coefficients);
}

TEST_CASE("exceptional point") {
  const double cs = std::sqrt(0.4);
  const auto fam = metric_nullspace(build_alpha({cs}));
  CHECK(fam.defective);
  CHECK(fam.dim == 4);
  const auto profile = boundary_degeneracy_profile(std::vector<BandParam>{{cs}});
  REQUIRE(profile.size() == 1);
  CHECK(profile[0].exceptional);
  CHECK_FALSE(profile[0].min_eigenvalue.has_value());
}

TEST_CASE("degeneracy profile") {
  const double cs = std::sqrt(0.4);
  const std::vector<BandParam> alphas{{0.01}, {0.5 * cs}, {0.99 * cs}, {0.632}};
  const auto prof = boundary_degeneracy_profile(alphas);
  REQUIRE(prof.size() == 4);
  for (const auto& p : prof) REQUIRE(p.min_eigenvalue.has_value());
  CHECK(*prof[0].min_eigenvalue > 0.5);
  CHECK(*prof[2].min_eigenvalue <= 0.1 * *prof[1].min_eigenvalue);
  CHECK(*prof[3].min_eigenvalue < 1e-2);
  CHECK(*prof[3].min_eigenvalue <= 1e-3);

  CHECK_THROWS_AS(boundary_degeneracy_profile(std::vector<BandParam>{{0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(boundary_degeneracy_profile(std::vector<BandParam>{{0.7}}), std::invalid_argument);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(metric_nullspace(RealMatrix::Zero(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(metric_nullspace(RealMatrix::Zero(17, 17)), std::invalid_argument);
  CHECK_THROWS_AS(metric_nullspace(RealMatrix::Identity(2, 2), 0.0), std::invalid_argument);
}
