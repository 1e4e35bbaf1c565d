#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "quasih/model.hpp"

namespace quasih {

enum class SeriesBranch { E1, E3 };

/// Small-alpha expansions of the band-model levels, truncated after the
/// alpha^order term (order in {2, 4, 6}):
///   |E_3| = 3 - 2 a^2 - a^4 - (7/6) a^6 + O(a^8)
///   |E_1| = 1 + a^4 + (3/2) a^6 + O(a^8)
double band_series_E3(double alpha, int order);
double band_series_E1(double alpha, int order);
double band_series(SeriesBranch branch, double alpha, int order);

/// |E| of the branch from the closed-form band energies (real region only).
double band_exact_level(SeriesBranch branch, double alpha);

/// Truncation error measured against the closed form on a window.
struct SeriesCheck {
  SeriesBranch branch = SeriesBranch::E3;
  int order = 0;
  std::vector<double> coefficients;  ///< of alpha^0, alpha^2, ... alpha^order
  double max_abs_error_over_window = 0.0;
  std::pair<double, double> window;
  /// Smallest err(alpha) / err(alpha / 2) over the probe points; an
  /// O(alpha^(order+2)) remainder gives about 2^(order+2).
  double min_halving_ratio = 0.0;
  bool scaling_ok = false;  ///< min_halving_ratio >= 0.8 * 2^(order+2)
};

/// Probes `probes` equally spaced alphas in (window.first, window.second].
SeriesCheck check_series(SeriesBranch branch, int order,
                         std::pair<double, double> window = {0.0, 0.25},
                         std::size_t probes = 8);

/// 5 alpha^4 - 12 alpha^2 + 4; its roots in alpha^2 are 2/5 and 2.
double exceptional_discriminant(double alpha);

struct CriticalStrength {
  double alpha_cs = 0.0;            ///< sqrt(2/5)
  double e_cs = 0.0;                ///< sqrt(13/5)
  double discriminant_at_cs = 0.0;  ///< should vanish
  std::vector<double> numeric_levels;  ///< real parts of the numeric spectrum
  double max_level_deviation = 0.0;    ///< max ||E_n| - e_cs|
  bool verified = false;  ///< discriminant <= 1e-12 and deviation <= 1e-6
};

CriticalStrength critical_strength();

/// a = a_pmn (-1 + t + coef_a t^2), c = c_pmn (-1 + t + coef_c t^2) around the
/// PMN vertex (corner_a * 2, corner_c * sqrt(3)); corner signs are +-1.
struct SpikeAnsatz {
  double t = 0.0;
  double coef_a = 0.0;
  double coef_c = 0.0;
  int corner_a = -1;
  int corner_c = -1;
};

/// Largest t accepted by spike_point unless the caller overrides it.
inline constexpr double kSpikeTMax = 0.2;

struct PlaneAC {
  double a = 0.0;
  double c = 0.0;
};

PlaneAC spike_point(const SpikeAnsatz& ansatz, double t_max = kSpikeTMax);

/// Leading-order membership: t >= 0 and coef_c - 1/2 <= coef_a <= coef_c + 8/9.
bool spike_membership(double coef_a, double coef_c, double t);

/// Exact membership of spike_point(ansatz) in the closed domain (b = 0, d = c).
bool spike_exact_membership(const SpikeAnsatz& ansatz, double tol = 1e-12);

/// The admissible coef_a interval at fixed coef_c and t, located on the exact
/// domain by a coarse sweep over [coef_c - 2, coef_c + 2] followed by
/// bisection of both edges.
struct SpikeBand {
  double t = 0.0;
  double coef_c = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double lower_offset = 0.0;  ///< lower - (coef_c - 1/2)
  double upper_offset = 0.0;  ///< upper - (coef_c + 8/9)
};

SpikeBand spike_band(double coef_c, double t, int corner_a = -1, int corner_c = -1);

struct SpikeSample {
  double t = 0.0;
  double coef_a = 0.0;
  double a = 0.0;
  double c = 0.0;
  bool inside = false;
};

/// Figure-2 style scan: for each t and each of `resolution` coef_a values in
/// [coef_c - 1.5, coef_c + 2], the point and its exact membership.
std::vector<SpikeSample> spike_scan(double coef_c, const std::vector<double>& ts,
                                    std::size_t resolution, int corner_a = -1,
                                    int corner_c = -1);

}  // namespace quasih
