#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "quasih/model.hpp"
#include "quasih/spectrum.hpp"

namespace quasih::io {

/// Shortest locale-independent rendering with 17 significant digits
/// ("%.17g" semantics). Non-finite values render as "nan", "inf", "-inf".
std::string format_double(double v);

/// Serialises a JSON value with every floating-point number printed by
/// format_double (non-finite numbers become null). `indent < 0` is compact.
void write_json(std::ostream& os, const nlohmann::json& value, int indent = 2);
std::string dump_json(const nlohmann::json& value, int indent = 2);

/// {"n": int, "rows": [[...], ...]}
nlohmann::json matrix_to_json(const RealMatrix& m);
/// Throws std::invalid_argument when the rows are ragged or disagree with n.
RealMatrix matrix_from_json(const nlohmann::json& j);

/// n lines of n comma-separated values, '\n' terminated.
std::string matrix_to_csv(const RealMatrix& m);

/// {"energies": [[re, im], ...], "classification": "...", "max_imag": x}
nlohmann::json spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const nlohmann::json& j);

}  // namespace quasih::io
