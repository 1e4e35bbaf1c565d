#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quasih/domain.hpp"
#include "quasih/metric.hpp"
#include "quasih/perturb.hpp"
#include "quasih/spectrum.hpp"

namespace quasih::cli {

enum class ModelKind { TwoState, Full, Band, Alpha };
enum class OutputFormat { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

struct ProfileSweep {
  double from = 0.0;
  double to = 0.0;
  std::size_t count = 0;
};

/// Everything a subcommand needs; produced by parse_args, consumed by execute.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> argv;  // as given, for the provenance sidecar

  ModelKind model = ModelKind::Full;
  ParamPoint params;
  double alpha = 0.0;
  std::optional<double> d2;  // from --d2 or --d

  double tol = kRealityTol;
  double boundary_tol = kBoundaryTol;
  double rank_tol = kRankTol;

  Range a_range{-4.0, 4.0};
  Range b_range{-4.0, 4.0};
  GridShape resolution{81, 81};

  Vec2 center;
  std::optional<Vec2> direction;
  std::size_t rays = 64;

  bool pmn_interval = false;

  bool emit_basis = false;
  bool emit_positivity = false;
  std::optional<ProfileSweep> profile;

  std::optional<SeriesBranch> series;
  int order = 6;
  bool critical = false;
  std::optional<std::array<double, 3>> spike;  // coef_a, coef_c, t

  std::size_t samples = 256;
  double extent = 5.0;

  double coef_c = 0.0;
  std::vector<double> spike_ts{0.02, 0.01, 0.005};
  std::size_t spike_resolution = 351;
  int corner_a = -1;
  int corner_c = -1;

  std::size_t n = 4;

  std::optional<OutputFormat> format;
  std::string output_path;
  unsigned threads = 1;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = kExitOk;
};

/// Parses argv (without the program name). Help requests yield exit 0 and no
/// config; usage errors yield exit 2. `--config FILE` splices flat
/// `key = value` lines in front of the explicit flags, so flags win.
ParseOutcome parse_args(const std::vector<std::string>& args, std::ostream& out,
                        std::ostream& err);

/// Runs a parsed configuration. Data go to `out`, or to cfg.output_path plus a
/// `<path>.meta.json` provenance sidecar.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Number of independent couplings of an N-state model, floor(N^2 / 4).
/// N must be even and at least 2.
std::size_t dim_domain(std::size_t n);

/// Hardware concurrency, capped by QUASIH_THREADS when set to a positive int.
unsigned worker_count_from_env();

}  // namespace quasih::cli
