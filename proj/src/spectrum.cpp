#include "quasih/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace quasih {

std::string_view to_string(Reality r) {
  switch (r) {
    case Reality::AllReal:
      return "AllReal";
    case Reality::RealDegenerate:
      return "RealDegenerate";
    case Reality::ComplexPairs:
      return "ComplexPairs";
  }
  return "unknown";
}

Reality reality_from_string(std::string_view name) {
  for (auto r : {Reality::AllReal, Reality::RealDegenerate, Reality::ComplexPairs}) {
    if (to_string(r) == name) return r;
  }
  throw std::invalid_argument("quasih: unknown reality class '" +
                              std::string(name) + "'");
}

Reality classify_reality(const Spectrum& s, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("quasih: reality tolerance must be positive");
  }
  double max_imag = 0.0;
  for (const auto& e : s.energies) max_imag = std::max(max_imag, std::abs(e.imag()));
  if (max_imag >= tol) return Reality::ComplexPairs;

  const auto& e = s.energies;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      if (std::abs(e[i] - e[j]) <= tol) return Reality::RealDegenerate;
    }
  }
  return Reality::AllReal;
}

Spectrum make_spectrum(std::vector<Complex> energies, double tol) {
  std::sort(energies.begin(), energies.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  Spectrum s;
  s.energies = std::move(energies);
  for (const auto& e : s.energies) s.max_imag = std::max(s.max_imag, std::abs(e.imag()));
  s.classification = classify_reality(s, tol);
  return s;
}

namespace {

// Both roots s of s^2 - 2 A s + B = 0, avoiding cancellation in the smaller one.
std::pair<Complex, Complex> reduced_quadratic_roots(Complex A, Complex B) {
  const Complex w = std::sqrt(A * A - B);
  const Complex big = (std::real(std::conj(A) * w) >= 0.0) ? A + w : A - w;
  if (big == Complex(0.0, 0.0)) return {big, big};
  return {big, B / big};
}

}  // namespace

Spectrum closed_form_energies(double a, double b, double d, double tol) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(d)) {
    throw std::invalid_argument("quasih: non-finite input to closed_form_energies");
  }
  const double d2 = d * d;
  const double A = 5.0 - d2 - 0.5 * (a * a + b * b);
  const double shifted = d2 - a * b + 3.0;
  const double skew = b - 3.0 * a;
  const double B = shifted * shifted - skew * skew;

  const auto [s1, s2] = reduced_quadratic_roots(A, B);
  const Complex r1 = std::sqrt(s1);
  const Complex r2 = std::sqrt(s2);
  return make_spectrum({r1, -r1, r2, -r2}, tol);
}

Spectrum band_closed_energies(BandParam alpha, double tol) {
  const double x = alpha.alpha;
  if (!std::isfinite(x)) {
    throw std::invalid_argument("quasih: non-finite band coupling");
  }
  const double x2 = x * x;
  const Complex root = std::sqrt(Complex(5.0 * x2 * x2 - 12.0 * x2 + 4.0, 0.0));
  const Complex e1 = std::sqrt(Complex(5.0 - 6.0 * x2, 0.0) - 2.0 * root);
  const Complex e3 = std::sqrt(Complex(5.0 - 6.0 * x2, 0.0) + 2.0 * root);
  return make_spectrum({e1, -e1, e3, -e3}, tol);
}

Spectrum numeric_energies(const RealMatrix& h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("quasih: numeric_energies needs a non-empty square matrix");
  }
  if (h.rows() > kMaxNumericDim) {
    throw std::invalid_argument("quasih: matrix dimension " + std::to_string(h.rows()) +
                                " exceeds limit " + std::to_string(kMaxNumericDim));
  }
  if (!h.allFinite()) {
    throw std::invalid_argument("quasih: matrix has non-finite entries");
  }
  Eigen::EigenSolver<RealMatrix> solver(h, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("quasih: eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd& ev = solver.eigenvalues();
  return make_spectrum(std::vector<Complex>(ev.data(), ev.data() + ev.size()), tol);
}

std::vector<Complex> polynomial_roots(std::span<const double> descending) {
  std::size_t lead = 0;
  while (lead < descending.size() && descending[lead] == 0.0) ++lead;
  if (descending.size() - lead < 2) {
    throw std::invalid_argument("quasih: polynomial must have degree >= 1");
  }
  const auto coeffs = descending.subspan(lead);
  const auto n = static_cast<Eigen::Index>(coeffs.size() - 1);

  RealMatrix companion = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    companion(i, n - 1) = -coeffs[static_cast<std::size_t>(n - i)] / coeffs[0];
  }
  Eigen::EigenSolver<RealMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("quasih: companion eigenvalues did not converge");
  }
  const Eigen::VectorXcd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double multiset_distance(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("quasih: multisets differ in size");
  }
  const std::size_t n = x.size();
  if (n == 0) return 0.0;

  if (n <= 8) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double worst = 0.0;
      for (std::size_t i = 0; i < n && worst < best; ++i) {
        worst = std::max(worst, std::abs(x[i] - y[perm[i]]));
      }
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }

  std::vector<bool> used(n, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pick = n;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j] && std::abs(x[i] - y[j]) < dist) {
        dist = std::abs(x[i] - y[j]);
        pick = j;
      }
    }
    used[pick] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

}  // namespace quasih
