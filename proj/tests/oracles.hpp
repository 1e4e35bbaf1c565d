#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's own polynomial or closed-form code.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Coefficients c0..c4 of det(H - E I) for a 4x4 H, recovered by sampling the
// determinant at five nodes and solving the Vandermonde system.
inline std::array<double, 5> charpoly4(const Eigen::MatrixXd& h) {
  constexpr std::array<double, 5> nodes{-2.0, -1.0, 0.0, 1.0, 2.0};
  Eigen::Matrix<double, 5, 5> v;
  Eigen::Matrix<double, 5, 1> rhs;
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 5; ++k) v(i, k) = std::pow(nodes[i], k);
    rhs(i) = (h - nodes[i] * Eigen::MatrixXd::Identity(4, 4)).determinant();
  }
  const Eigen::Matrix<double, 5, 1> c = v.fullPivLu().solve(rhs);
  return {c(0), c(1), c(2), c(3), c(4)};
}

// The constant term expanded by hand from the determinant at E = 0.
inline double constant_term(double a, double b, double c, double d) {
  return 9 - 9 * a * a - b * b + 3 * c * c + 3 * d * d + a * a * b * b + c * c * d * d -
         2 * a * b * c * d;
}

inline std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h.cast<std::complex<double>>());
  std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                        es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

// Max over a best matching of |x_i - y_pi(i)|, brute force over permutations.
inline double match_distance(std::vector<std::complex<double>> x,
                             std::vector<std::complex<double>> y) {
  std::vector<int> perm(y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  double best = INFINITY;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Number of sign changes of f along a closed polyline of n samples.
template <class F>
int sign_changes_on_circle(double radius, F f, int n = 200000) {
  int changes = 0;
  double prev = f(radius, 0.0);
  for (int k = 1; k <= n; ++k) {
    const double th = 2.0 * M_PI * k / n;
    const double cur = f(radius * std::cos(th), radius * std::sin(th));
    if ((prev < 0) != (cur < 0)) ++changes;
    prev = cur;
  }
  return changes;
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
};

}  // namespace oracle
