#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace cvwit::cli {

/// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
[[nodiscard]] std::string csv_escape(const std::string& field);

/// Scalar JSON value rendered for a CSV cell (strings unquoted, numbers in
/// the same shortest round-trip form as the JSON output).
[[nodiscard]] std::string csv_cell(const Json& value);

/// Writes a header and rows of JSON objects sharing the header's keys.
/// Lines end in CRLF.
void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<Json>& rows);

/// Pretty-printed JSON with a trailing newline; key order is insertion order.
void write_json(std::ostream& os, const Json& doc);

/// Writes to `path`, or stdout when empty; throws Error when the file cannot be written.
void emit(const std::string& path, const std::string& text);

}  // namespace cvwit::cli
