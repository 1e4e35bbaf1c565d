#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace quasih {

/// Dense real matrix. All Hamiltonians in this library are real; the
/// non-Hermiticity lives in the antisymmetric off-diagonal coupling.
using RealMatrix = Eigen::MatrixXd;

/// The four real couplings of the 4x4 model. In the partitioned basis
/// (phi_0, phi_1 | chi_0, chi_1) the even/odd coupling block is
/// [[c, b], [a, d]].
struct ParamPoint {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  bool operator==(const ParamPoint&) const = default;
};

/// Coupling strength of the one-parameter band model.
struct BandParam {
  double alpha = 0.0;
};

/// Where the harmonic ladder is anchored on the energy axis.
enum class EnergyOrigin {
  Shifted,    ///< centred so the unperturbed spectrum is symmetric about 0
  Unshifted,  ///< raw harmonic-oscillator levels 4n+1 (even), 4n+3 (odd)
};

/// 2x2 model [[-1, b], [-b, 1]].
RealMatrix build_two_state(double b);

/// 4x4 model in the partitioned (even | odd) basis, diagonal (-3, 1, -1, 3).
RealMatrix build_full(const ParamPoint& p);

/// build_full with the second and third basis vectors interchanged.
/// Isospectral to build_full; diagonal (-3, -1, 1, 3).
RealMatrix build_reordered(const ParamPoint& p);

/// Tridiagonal two-parameter matrix, equal to build_reordered({a, 0, c, c}).
RealMatrix build_band(double a, double c);

/// One-parameter band matrix with off-diagonals +-2 alpha.
/// Equal to build_band(-2 alpha, 2 alpha).
RealMatrix build_alpha(BandParam alpha);

/// Parameter point of build_band(a, c) in the (a, b, c, d) coordinates.
ParamPoint band_point(double a, double c);

/// Parameter point of build_alpha(alpha) in the (a, b, c, d) coordinates.
ParamPoint alpha_point(BandParam alpha);

/// Harmonic diagonal for n_plus even and n_minus odd basis states, even
/// sector first. Throws std::invalid_argument when both counts are zero.
RealMatrix harmonic_diag(std::size_t n_plus, std::size_t n_minus,
                         EnergyOrigin origin = EnergyOrigin::Shifted);

/// General partitioned model [[S, B], [-B^T, L]] where S, L are the harmonic
/// diagonals and B (n_plus x n_minus) is the caller-supplied coupling block.
RealMatrix build_partitioned(const RealMatrix& coupling,
                             EnergyOrigin origin = EnergyOrigin::Shifted);

/// Permutation matrix that swaps basis vectors 2 and 3 (1-based) of a 4x4
/// problem; build_reordered(p) == P * build_full(p) * P.
RealMatrix reorder_permutation();

}  // namespace quasih
