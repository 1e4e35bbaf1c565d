#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "quasih/model.hpp"

namespace quasih {

using Complex = std::complex<double>;

/// Absolute tolerance on |Im E| (and on level gaps) for O(1) matrix entries.
inline constexpr double kRealityTol = 1e-9;

/// Largest matrix accepted by numeric_energies.
inline constexpr Eigen::Index kMaxNumericDim = 64;

enum class Reality {
  AllReal,         ///< real and pairwise separated by more than tol
  RealDegenerate,  ///< real, with at least one gap <= tol
  ComplexPairs,    ///< some |Im E| >= tol
};

std::string_view to_string(Reality r);
/// Throws std::invalid_argument on an unknown name.
Reality reality_from_string(std::string_view name);

/// Energies sorted by (real part, imaginary part).
struct Spectrum {
  std::vector<Complex> energies;
  Reality classification = Reality::AllReal;
  double max_imag = 0.0;
};

/// Sorts the energies canonically and classifies them.
Spectrum make_spectrum(std::vector<Complex> energies, double tol = kRealityTol);

Reality classify_reality(const Spectrum& s, double tol = kRealityTol);

/// E = +-sqrt(A +- sqrt(A^2 - B)) for the c^2 = d^2 model, continued to
/// complex values with principal square roots.
Spectrum closed_form_energies(double a, double b, double d,
                              double tol = kRealityTol);

/// E_{+-1}, E_{+-3} of the band model:
///   +-[5 - 6 alpha^2 -+ 2 (5 alpha^4 - 12 alpha^2 + 4)^{1/2}]^{1/2}.
Spectrum band_closed_energies(BandParam alpha, double tol = kRealityTol);

/// Eigenvalues of a real square matrix (n <= 64) by Hessenberg-QR.
Spectrum numeric_energies(const RealMatrix& h, double tol = kRealityTol);

/// Roots of c[0] x^n + c[1] x^(n-1) + ... + c[n] as eigenvalues of the
/// companion matrix. Leading zero coefficients are dropped.
std::vector<Complex> polynomial_roots(std::span<const double> descending);

/// Smallest achievable max |x_i - y_perm(i)| over all pairings of two
/// equally sized multisets. Exhaustive for n <= 8, greedy beyond.
double multiset_distance(std::span<const Complex> x, std::span<const Complex> y);

}  // namespace quasih
