#include "quasih/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace quasih::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void write_string(std::ostream& os, const std::string& s) {
  // Reuse the library's escaping for strings.
  os << nlohmann::json(s).dump();
}

void write_value(std::ostream& os, const nlohmann::json& v, int indent, int depth) {
  const bool pretty = indent >= 0;
  auto newline = [&](int level) {
    if (!pretty) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * level), ' ');
  };

  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        write_string(os, it.key());
        os << (pretty ? ": " : ":");
        write_value(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line; they are mostly coordinates.
      const bool flat = std::all_of(v.begin(), v.end(), [](const nlohmann::json& e) {
        return e.is_primitive();
      });
      os << '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) os << (flat && pretty ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        write_value(os, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      os << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d)) {
        os << format_double(d);
      } else {
        os << "null";
      }
      return;
    }
    case nlohmann::json::value_t::string:
      write_string(os, v.get_ref<const std::string&>());
      return;
    default:
      os << v.dump();
      return;
  }
}

}  // namespace

void write_json(std::ostream& os, const nlohmann::json& value, int indent) {
  write_value(os, value, indent, 0);
}

std::string dump_json(const nlohmann::json& value, int indent) {
  std::ostringstream os;
  write_json(os, value, indent);
  return os.str();
}

nlohmann::json matrix_to_json(const RealMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("quasih: only square matrices are serialised");
  }
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"n", m.rows()}, {"rows", std::move(rows)}};
}

RealMatrix matrix_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<Eigen::Index>();
  const auto& rows = j.at("rows");
  if (n < 1 || !rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw std::invalid_argument("quasih: matrix JSON has inconsistent dimension");
  }
  RealMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw std::invalid_argument("quasih: matrix JSON row has wrong length");
    }
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

std::string matrix_to_csv(const RealMatrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

nlohmann::json spectrum_to_json(const Spectrum& s) {
  nlohmann::json energies = nlohmann::json::array();
  for (const auto& e : s.energies) energies.push_back({e.real(), e.imag()});
  return {{"energies", std::move(energies)},
          {"classification", std::string(to_string(s.classification))},
          {"max_imag", s.max_imag}};
}

Spectrum spectrum_from_json(const nlohmann::json& j) {
  Spectrum s;
  for (const auto& e : j.at("energies")) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument("quasih: energy must be a [re, im] pair");
    }
    s.energies.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  s.classification = reality_from_string(j.at("classification").get<std::string>());
  s.max_imag = j.at("max_imag").get<double>();
  return s;
}

}  // namespace quasih::io
