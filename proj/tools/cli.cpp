#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasih/errors.hpp"
#include "quasih/io.hpp"
#include "quasih/secular.hpp"

namespace quasih::cli {

using nlohmann::json;

namespace {

constexpr const char* kToolName = "quasih";
constexpr const char* kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Argument helpers

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw std::invalid_argument("not a finite number: '" + s + "'");
  }
  return v;
}

std::size_t to_count(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a count: '" + s + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s, char sep, std::size_t expected,
                               const char* what) {
  const auto parts = split(s, sep);
  if (expected != 0 && parts.size() != expected) {
    throw std::invalid_argument(std::string(what) + " expects " + std::to_string(expected) +
                                " values separated by '" + sep + "'");
  }
  std::vector<double> values;
  for (const auto& p : parts) values.push_back(to_double(p));
  return values;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Reads `key = value` lines ('#' comments) into flag tokens.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
    }
    if (value == "true") {
      tokens.push_back("--" + key);
    } else if (value == "false") {
      continue;
    } else {
      tokens.push_back("--" + key);
      std::istringstream words(value);
      for (std::string w; words >> w;) tokens.push_back(w);
    }
  }
  return tokens;
}

// Moves `--config FILE` out of args and splices its tokens right after the
// subcommand name, ahead of explicit flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;
  const auto extra = config_tokens(*path);
  const auto sub = std::find_if(rest.begin(), rest.end(),
                                [](const std::string& a) { return !a.empty() && a[0] != '-'; });
  const auto at = sub == rest.end() ? rest.end() : std::next(sub);
  rest.insert(at, extra.begin(), extra.end());
  return rest;
}

ModelKind model_from_string(const std::string& s) {
  if (s == "two-state") return ModelKind::TwoState;
  if (s == "full") return ModelKind::Full;
  if (s == "band") return ModelKind::Band;
  if (s == "alpha") return ModelKind::Alpha;
  throw std::invalid_argument("unknown model '" + s + "'");
}

const char* model_name(ModelKind m) {
  switch (m) {
    case ModelKind::TwoState:
      return "two-state";
    case ModelKind::Full:
      return "full";
    case ModelKind::Band:
      return "band";
    case ModelKind::Alpha:
      return "alpha";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Output helpers

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }

RealMatrix model_matrix(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::TwoState:
      return build_two_state(cfg.params.b);
    case ModelKind::Full:
      return build_full(cfg.params);
    case ModelKind::Band:
      return build_band(cfg.params.a, cfg.params.c);
    case ModelKind::Alpha:
      return build_alpha({cfg.alpha});
  }
  throw std::logic_error("unhandled model");
}

std::optional<ParamPoint> model_point(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::TwoState:
      return std::nullopt;
    case ModelKind::Full:
      return cfg.params;
    case ModelKind::Band:
      return band_point(cfg.params.a, cfg.params.c);
    case ModelKind::Alpha:
      return alpha_point({cfg.alpha});
  }
  return std::nullopt;
}

json model_parameters(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::TwoState:
      return {{"b", cfg.params.b}};
    case ModelKind::Full:
      return {{"a", cfg.params.a}, {"b", cfg.params.b}, {"c", cfg.params.c}, {"d", cfg.params.d}};
    case ModelKind::Band:
      return {{"a", cfg.params.a}, {"c", cfg.params.c}};
    case ModelKind::Alpha:
      return {{"alpha", cfg.alpha}};
  }
  return json::object();
}

json pmn_json(const PMNPoint& p) {
  return {{"a", p.a},
          {"b", p.b},
          {"c", p.d},
          {"d", p.d},
          {"residuals",
           {{"sphere", p.residuals.sphere},
            {"linear", p.residuals.linear},
            {"constant", p.residuals.constant}}}};
}

double require_d2(const RunConfig& cfg) {
  if (!cfg.d2) throw std::invalid_argument("this subcommand needs --d2 or --d");
  return *cfg.d2;
}

OutputFormat format_or(const RunConfig& cfg, OutputFormat fallback) {
  return cfg.format.value_or(fallback);
}

void json_only(const RunConfig& cfg) {
  if (cfg.format == OutputFormat::Csv) {
    throw std::invalid_argument("subcommand '" + cfg.subcommand + "' only emits JSON");
  }
}

std::string csv_bool(bool v) { return v ? "1" : "0"; }

// ---------------------------------------------------------------------------
// Subcommands. Each returns the data payload as text.

std::string run_spectrum(const RunConfig& cfg) {
  json_only(cfg);
  const RealMatrix h = model_matrix(cfg);
  json j = io::spectrum_to_json(numeric_energies(h, cfg.tol));
  j["model"] = model_name(cfg.model);
  j["parameters"] = model_parameters(cfg);
  j["matrix"] = io::matrix_to_json(h);

  if (const auto p = model_point(cfg)) {
    const SecularInvariants s = secular_coeffs(*p);
    json sec = {{"e4", s.e4}, {"e3", s.e3}, {"e2", s.e2}, {"e1", s.e1}, {"e0", s.e0},
                {"A", s.A}, {"C", s.C}, {"alpha_hyp", s.alpha_hyp}, {"beta_hyp", s.beta_hyp}};
    if (s.B) sec["B"] = *s.B;
    j["secular"] = std::move(sec);
    if (p->c * p->c == p->d * p->d) {
      j["closed_form"] = io::spectrum_to_json(closed_form_energies(p->a, p->b, p->d, cfg.tol));
    }
  }
  if (cfg.model == ModelKind::Alpha) {
    j["band_closed_form"] = io::spectrum_to_json(band_closed_energies({cfg.alpha}, cfg.tol));
  }
  return io::dump_json(j) + "\n";
}

std::string run_scan(const RunConfig& cfg) {
  const double d = std::sqrt(require_d2(cfg));
  const DomainGrid grid =
      scan_grid(cfg.a_range, cfg.b_range, d, cfg.resolution, cfg.boundary_tol, cfg.threads);
  const std::size_t nb = grid.b_values.size();

  if (format_or(cfg, OutputFormat::Csv) == OutputFormat::Json) {
    json cells = json::array();
    for (std::size_t ia = 0; ia < grid.a_values.size(); ++ia) {
      for (std::size_t ib = 0; ib < nb; ++ib) {
        const auto& v = grid.at(ia, ib);
        const auto& s = grid.sectors[ia * nb + ib];
        cells.push_back({{"a", grid.a_values[ia]}, {"b", grid.b_values[ib]},
                         {"inside", v.inside}, {"margin", v.margin},
                         {"on_boundary", v.on_boundary},
                         {"sector", json::array({s.alpha_side, s.beta_side})}});
      }
    }
    return io::dump_json({{"d2", *cfg.d2}, {"cells", std::move(cells)}}) + "\n";
  }

  std::string csv = "a,b,inside,margin\n";
  for (std::size_t ia = 0; ia < grid.a_values.size(); ++ia) {
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const auto& v = grid.at(ia, ib);
      csv += io::format_double(grid.a_values[ia]) + ',' + io::format_double(grid.b_values[ib]) +
             ',' + csv_bool(v.inside) + ',' + io::format_double(v.margin) + '\n';
    }
  }
  return csv;
}

std::string run_boundary(const RunConfig& cfg) {
  const double d = std::sqrt(require_d2(cfg));
  BoundaryCurve curve;
  curve.d2 = *cfg.d2;
  if (cfg.direction) {
    // A single ray: failures surface as NumericalError (exit 1).
    const BoundaryHit hit = boundary_trace_ray(cfg.center, *cfg.direction, d, cfg.boundary_tol);
    curve.points.push_back(hit.point);
    curve.residuals.push_back(std::abs(hit.margin));
  } else {
    curve = trace_boundary(cfg.center, d, cfg.rays, cfg.boundary_tol);
  }

  if (format_or(cfg, OutputFormat::Json) == OutputFormat::Csv) {
    std::string csv = "a,b,residual\n";
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
      csv += io::format_double(curve.points[k].x) + ',' + io::format_double(curve.points[k].y) +
             ',' + io::format_double(curve.residuals[k]) + '\n';
    }
    return csv;
  }
  json points = json::array();
  for (const auto& p : curve.points) points.push_back(vec2_json(p));
  return io::dump_json({{"fixed", {{"d2", curve.d2}}},
                        {"center", vec2_json(cfg.center)},
                        {"points", std::move(points)},
                        {"residuals", curve.residuals}}) +
         "\n";
}

std::string run_pmn(const RunConfig& cfg) {
  json_only(cfg);
  const double d2 = require_d2(cfg);
  json points = json::array();
  const auto found = pmn_points(d2);
  for (const auto& p : found) points.push_back(pmn_json(p));
  json j = {{"d2", d2}, {"count", found.size()}, {"points", std::move(points)}};
  if (cfg.pmn_interval) {
    const Interval iv = pmn_interval();
    j["interval"] = {{"lo", iv.lo}, {"hi", iv.hi}, {"lo_open", true}};
  }
  return io::dump_json(j) + "\n";
}

std::string run_metric(const RunConfig& cfg) {
  if (cfg.profile) {
    const ProfileSweep& sw = *cfg.profile;
    if (sw.count == 0) throw std::invalid_argument("--profile needs a positive count");
    std::vector<BandParam> alphas;
    for (std::size_t k = 0; k < sw.count; ++k) {
      const double x = sw.count == 1 ? sw.from
                                     : sw.from + (sw.to - sw.from) * static_cast<double>(k) /
                                                     static_cast<double>(sw.count - 1);
      alphas.push_back({x});
    }
    const auto profile = boundary_degeneracy_profile(alphas);
    if (format_or(cfg, OutputFormat::Csv) == OutputFormat::Json) {
      json rows = json::array();
      for (const auto& p : profile) {
        rows.push_back({{"alpha", p.alpha},
                        {"min_eig", p.min_eigenvalue ? json(*p.min_eigenvalue) : json(nullptr)},
                        {"exceptional", p.exceptional}});
      }
      return io::dump_json({{"profile", std::move(rows)}}) + "\n";
    }
    std::string csv = "alpha,min_eig\n";
    for (const auto& p : profile) {
      csv += io::format_double(p.alpha) + ',' +
             (p.min_eigenvalue ? io::format_double(*p.min_eigenvalue) : std::string("nan")) + '\n';
    }
    return csv;
  }

  json_only(cfg);
  const RealMatrix h = model_matrix(cfg);
  const MetricFamily fam = metric_nullspace(h, cfg.rank_tol);
  json j = {{"model", model_name(cfg.model)},
            {"parameters", model_parameters(cfg)},
            {"dim", fam.dim},
            {"residual", fam.residual},
            {"defective", fam.defective},
            {"singular_values", fam.singular_values}};
  if (cfg.emit_basis) {
    json basis = json::array();
    for (const auto& b : fam.basis) basis.push_back(io::matrix_to_json(b));
    j["basis"] = std::move(basis);
  }
  if (cfg.emit_positivity && fam.dim > 0) {
    const PositivityCertificate cert = find_positive(fam);
    std::vector<double> coeffs(cert.coefficients.data(),
                               cert.coefficients.data() + cert.coefficients.size());
    j["positivity"] = {
        {"coefficients", coeffs},
        {"min_eigenvalue", cert.min_eigenvalue},
        {"positive", cert.positive},
        {"strategy", cert.strategy == PositivityStrategy::EigenDyads ? "eigen-dyads"
                                                                     : "random-search"},
        {"theta", io::matrix_to_json(cert.theta)}};
  }
  return io::dump_json(j) + "\n";
}

std::string run_perturb(const RunConfig& cfg) {
  json_only(cfg);
  if (!cfg.series && !cfg.critical && !cfg.spike) {
    throw std::invalid_argument("perturb needs --series, --critical or --spike");
  }
  json j = json::object();
  if (cfg.series) {
    const double value = band_series(*cfg.series, cfg.alpha, cfg.order);
    const double exact = band_exact_level(*cfg.series, cfg.alpha);
    j["series"] = {{"branch", *cfg.series == SeriesBranch::E1 ? "e1" : "e3"},
                   {"order", cfg.order},
                   {"alpha", cfg.alpha},
                   {"value", value},
                   {"exact", exact},
                   {"abs_error", std::abs(value - exact)}};
  }
  if (cfg.critical) {
    const CriticalStrength cs = critical_strength();
    j["critical"] = {{"alpha_cs", cs.alpha_cs},
                     {"alpha_cs_squared", cs.alpha_cs * cs.alpha_cs},
                     {"e_cs", cs.e_cs},
                     {"discriminant", cs.discriminant_at_cs},
                     {"numeric_levels", cs.numeric_levels},
                     {"max_level_deviation", cs.max_level_deviation},
                     {"verified", cs.verified}};
  }
  if (cfg.spike) {
    const auto [coef_a, coef_c, t] = *cfg.spike;
    const SpikeAnsatz ansatz{t, coef_a, coef_c, cfg.corner_a, cfg.corner_c};
    const PlaneAC pt = spike_point(ansatz);
    j["spike"] = {{"coef_a", coef_a},
                  {"coef_c", coef_c},
                  {"t", t},
                  {"corner", json::array({cfg.corner_a, cfg.corner_c})},
                  {"a", pt.a},
                  {"c", pt.c},
                  {"predicted_inside", spike_membership(coef_a, coef_c, t)},
                  {"exact_inside", spike_exact_membership(ansatz)}};
  }
  return io::dump_json(j) + "\n";
}

std::string run_fig1(const RunConfig& cfg) {
  json_only(cfg);
  const Figure1Geometry g = figure1_geometry(cfg.d2.value_or(1.6), cfg.samples, cfg.extent);
  json circle_pts = json::array();
  for (const auto& p : g.circle) circle_pts.push_back(vec2_json(p));
  json hyperbolas = json::array();
  const char* labels[2] = {"d2 = (b+3)(a-1)", "d2 = (b-3)(a+1)"};
  for (std::size_t k = 0; k < 2; ++k) {
    json branches = json::array();
    for (const auto& br : g.hyperbolas[k].branches) {
      json pts = json::array();
      for (const auto& p : br) pts.push_back(vec2_json(p));
      branches.push_back(std::move(pts));
    }
    hyperbolas.push_back({{"label", labels[k]},
                          {"center", vec2_json(g.hyperbolas[k].center)},
                          {"branches", std::move(branches)}});
  }
  json inter = json::array();
  for (const auto& p : g.intersections) inter.push_back(pmn_json(p));
  return io::dump_json({{"d2", g.d2},
                        {"circle", {{"radius", g.circle_radius},
                                    {"center", json::array({0.0, 0.0})},
                                    {"points", std::move(circle_pts)}}},
                        {"hyperbolas", std::move(hyperbolas)},
                        {"intersections", std::move(inter)}}) +
         "\n";
}

std::string run_fig2(const RunConfig& cfg) {
  const auto rows =
      spike_scan(cfg.coef_c, cfg.spike_ts, cfg.spike_resolution, cfg.corner_a, cfg.corner_c);
  if (format_or(cfg, OutputFormat::Csv) == OutputFormat::Json) {
    json samples = json::array();
    for (const auto& r : rows) {
      samples.push_back({{"t", r.t}, {"coef_a", r.coef_a}, {"a", r.a}, {"c", r.c},
                         {"inside", r.inside}});
    }
    json bands = json::array();
    for (double t : cfg.spike_ts) {
      const SpikeBand b = spike_band(cfg.coef_c, t, cfg.corner_a, cfg.corner_c);
      bands.push_back({{"t", b.t}, {"lower", b.lower}, {"upper", b.upper},
                       {"lower_offset", b.lower_offset}, {"upper_offset", b.upper_offset}});
    }
    return io::dump_json({{"coef_c", cfg.coef_c},
                          {"corner", json::array({cfg.corner_a, cfg.corner_c})},
                          {"samples", std::move(samples)},
                          {"bands", std::move(bands)}}) +
           "\n";
  }
  std::string csv = "t,coef_a,a,c,inside\n";
  for (const auto& r : rows) {
    csv += io::format_double(r.t) + ',' + io::format_double(r.coef_a) + ',' +
           io::format_double(r.a) + ',' + io::format_double(r.c) + ',' + csv_bool(r.inside) +
           '\n';
  }
  return csv;
}

std::string run_dim(const RunConfig& cfg) {
  json_only(cfg);
  return io::dump_json({{"n", cfg.n}, {"dim", dim_domain(cfg.n)}}) + "\n";
}

void report(std::ostream& err, const std::exception& e, const char* what = nullptr) {
  std::string msg = e.what();
  const std::string prefix = std::string(kToolName) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  err << prefix << (what ? what : "") << msg << "\n";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::size_t dim_domain(std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("dimension must be even and >= 2 (got " + std::to_string(n) + ")");
  }
  return n * n / 4;
}

unsigned worker_count_from_env() {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QUASIH_THREADS")) {
    unsigned cap = 0;
    const std::string s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (res.ec == std::errc() && cap > 0) workers = std::min(workers, cap);
  }
  return workers;
}

ParseOutcome parse_args(const std::vector<std::string>& raw_args, std::ostream& out,
                        std::ostream& err) {
  RunConfig cfg;
  cfg.argv = raw_args;
  cfg.threads = worker_count_from_env();

  CLI::App app{"Toolkit for the four-parameter PT-symmetric 4x4 matrix model", kToolName};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  std::string format_name;
  app.add_option("--out,-o", cfg.output_path, "Write data to FILE (plus FILE.meta.json)");
  app.add_option("--format", format_name, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value file; explicit flags take precedence");

  // Model selection shared by spectrum and metric.
  std::string model_name_opt = "full";
  std::optional<double> alpha_opt;
  auto add_model_options = [&](CLI::App* sub) {
    sub->add_option("--model", model_name_opt, "two-state | full | band | alpha")
        ->check(CLI::IsMember({"two-state", "full", "band", "alpha"}));
    sub->add_option("--a", cfg.params.a, "coupling a");
    sub->add_option("--b", cfg.params.b, "coupling b");
    sub->add_option("--c", cfg.params.c, "coupling c");
    sub->add_option("--d", cfg.params.d, "coupling d");
    sub->add_option("--alpha", alpha_opt, "band coupling alpha (selects the alpha model)");
  };
  std::optional<double> d2_opt;
  std::optional<double> d_opt;
  auto add_d_options = [&](CLI::App* sub) {
    auto* o2 = sub->add_option("--d2", d2_opt, "frozen c^2 = d^2");
    auto* o1 = sub->add_option("--d", d_opt, "frozen c = d");
    o2->excludes(o1);
  };

  auto* spectrum = app.add_subcommand("spectrum", "Energies of a model matrix");
  add_model_options(spectrum);
  spectrum->add_option("--tol", cfg.tol, "reality tolerance on |Im E|");

  auto* scan = app.add_subcommand("scan", "Domain membership on an (a, b) grid (CSV)");
  add_d_options(scan);
  std::string range_opt = "-4:4:-4:4";
  std::string res_opt = "81x81";
  scan->add_option("--range", range_opt, "a0:a1:b0:b1");
  scan->add_option("--res", res_opt, "NAxNB grid resolution");
  scan->add_option("--tol", cfg.boundary_tol, "margin tolerance");

  auto* boundary = app.add_subcommand("boundary", "Trace the domain boundary by ray bisection");
  add_d_options(boundary);
  std::vector<double> center_opt;
  std::vector<double> dir_opt;
  boundary->add_option("--center", center_opt, "ray origin a b")->expected(2);
  boundary->add_option("--dir", dir_opt, "single ray direction x y")->expected(2);
  boundary->add_option("--rays", cfg.rays, "number of equally spaced rays")
      ->check(CLI::PositiveNumber);
  boundary->add_option("--tol", cfg.boundary_tol, "margin tolerance");

  auto* pmn = app.add_subcommand("pmn", "Points of maximal non-Hermiticity at fixed d^2");
  add_d_options(pmn);
  pmn->add_flag("--interval", cfg.pmn_interval, "also report the d^2 range with solutions");

  auto* metric = app.add_subcommand("metric", "Metric operators solving H^T Theta = Theta H");
  add_model_options(metric);
  metric->add_option("--rank-tol", cfg.rank_tol, "relative singular-value cut");
  metric->add_flag("--basis", cfg.emit_basis, "emit all basis matrices");
  metric->add_flag("--positivity", cfg.emit_positivity, "emit a positivity certificate");
  std::string profile_opt;
  metric->add_option("--profile", profile_opt, "alpha sweep a:b:n (CSV alpha,min_eig)");

  auto* perturb = app.add_subcommand("perturb", "Band-model series, critical strength, spike");
  std::string series_opt;
  perturb->add_option("--series", series_opt, "e1 | e3")->check(CLI::IsMember({"e1", "e3"}));
  perturb->add_option("--order", cfg.order, "series order (2, 4, 6)");
  perturb->add_option("--alpha", cfg.alpha, "band coupling for --series");
  perturb->add_flag("--critical", cfg.critical, "critical strength and its checks");
  std::vector<double> spike_opt;
  perturb->add_option("--spike", spike_opt, "coef_a coef_c t")->expected(3);
  perturb->add_option("--corner-a", cfg.corner_a, "sign of the PMN vertex a (+1/-1)");
  perturb->add_option("--corner-c", cfg.corner_c, "sign of the PMN vertex c (+1/-1)");

  auto* fig1 = app.add_subcommand("fig1", "Circle, hyperbolas and PMN intersections (JSON)");
  add_d_options(fig1);
  fig1->add_option("--samples", cfg.samples, "points per polyline")->check(CLI::Range(2, 100000));
  fig1->add_option("--extent", cfg.extent, "clip hyperbolas to |a|, |b| <= extent");

  auto* fig2 = app.add_subcommand("fig2", "Spike region near a PMN corner (CSV)");
  std::string ts_opt;
  fig2->add_option("--coef-c", cfg.coef_c, "second-order coefficient of c");
  fig2->add_option("--t", ts_opt, "comma-separated t values");
  fig2->add_option("--res", cfg.spike_resolution, "coef_a samples per t")
      ->check(CLI::Range(2, 1000000));
  fig2->add_option("--corner-a", cfg.corner_a, "sign of the PMN vertex a (+1/-1)");
  fig2->add_option("--corner-c", cfg.corner_c, "sign of the PMN vertex c (+1/-1)");

  auto* dim = app.add_subcommand("dim", "Parameter count floor(N^2/4) of an N-state model");
  dim->add_option("--n", cfg.n, "even dimension N >= 2")->required();

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kExitOk : kExitUsage};
  } catch (const std::exception& e) {
    report(err, e);
    return {std::nullopt, kExitUsage};
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!format_name.empty()) {
      cfg.format = format_name == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    }
    if (alpha_opt) cfg.alpha = *alpha_opt;
    const bool model_given =
        (spectrum->parsed() && spectrum->count("--model") > 0) ||
        (metric->parsed() && metric->count("--model") > 0);
    cfg.model = model_from_string(model_name_opt);
    if (alpha_opt && !model_given) cfg.model = ModelKind::Alpha;

    if (d2_opt) cfg.d2 = *d2_opt;
    if (d_opt) cfg.d2 = *d_opt * *d_opt;

    if (scan->parsed()) {
      const auto r = parse_list(range_opt, ':', 4, "--range");
      cfg.a_range = {r[0], r[1]};
      cfg.b_range = {r[2], r[3]};
      const auto parts = split(res_opt, 'x');
      if (parts.size() != 2) throw std::invalid_argument("--res expects NAxNB");
      cfg.resolution = {to_count(parts[0]), to_count(parts[1])};
      if (cfg.resolution.na == 0 || cfg.resolution.nb == 0) {
        throw std::invalid_argument("--res counts must be >= 1");
      }
    }
    if (!center_opt.empty()) cfg.center = {center_opt[0], center_opt[1]};
    if (!dir_opt.empty()) cfg.direction = Vec2{dir_opt[0], dir_opt[1]};
    if (!profile_opt.empty()) {
      const auto parts = split(profile_opt, ':');
      if (parts.size() != 3) throw std::invalid_argument("--profile expects a:b:n");
      cfg.profile = ProfileSweep{to_double(parts[0]), to_double(parts[1]), to_count(parts[2])};
    }
    if (!series_opt.empty()) {
      cfg.series = series_opt == "e1" ? SeriesBranch::E1 : SeriesBranch::E3;
    }
    if (!spike_opt.empty()) cfg.spike = std::array<double, 3>{spike_opt[0], spike_opt[1], spike_opt[2]};
    if (!ts_opt.empty()) cfg.spike_ts = parse_list(ts_opt, ',', 0, "--t");

    for (double tol : {cfg.tol, cfg.boundary_tol, cfg.rank_tol}) {
      if (!(tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    }
  } catch (const std::exception& e) {
    report(err, e);
    return {std::nullopt, kExitUsage};
  }
  return {std::move(cfg), kExitOk};
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string payload;
  try {
    const std::string& s = cfg.subcommand;
    if (s == "spectrum") payload = run_spectrum(cfg);
    else if (s == "scan") payload = run_scan(cfg);
    else if (s == "boundary") payload = run_boundary(cfg);
    else if (s == "pmn") payload = run_pmn(cfg);
    else if (s == "metric") payload = run_metric(cfg);
    else if (s == "perturb") payload = run_perturb(cfg);
    else if (s == "fig1") payload = run_fig1(cfg);
    else if (s == "fig2") payload = run_fig2(cfg);
    else if (s == "dim") payload = run_dim(cfg);
    else throw std::invalid_argument("unknown subcommand '" + s + "'");
  } catch (const std::invalid_argument& e) {
    report(err, e);
    return kExitUsage;
  } catch (const std::exception& e) {
    report(err, e, "numerical failure: ");
    return kExitNumerical;
  }

  if (cfg.output_path.empty()) {
    out << payload;
    return kExitOk;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) {
    err << kToolName << ": cannot write '" << cfg.output_path << "'\n";
    return kExitUsage;
  }
  file << payload;

  const json meta = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"subcommand", cfg.subcommand},
                     {"argv", cfg.argv},
                     {"threads", cfg.threads},
                     {"created_utc", utc_timestamp()}};
  std::ofstream sidecar(cfg.output_path + ".meta.json", std::ios::binary);
  sidecar << io::dump_json(meta) << "\n";
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const ParseOutcome parsed = parse_args(args, out, err);
  if (!parsed.config) return parsed.exit_code;
  return execute(*parsed.config, out, err);
}

}  // namespace quasih::cli
