#pragma once

#include <string>
#include <vector>

#include "cvxs/matrix.hpp"
#include "cvxs/table.hpp"

namespace cvxs {

/// RFC-4180-style CSV: header row required, UTF-8, '.' decimal separator,
/// quoted fields may contain commas, quotes ("" escape) and newlines.
/// Columns are matched by header name and reordered to schema order; extra
/// columns in the file are ignored.
Table load_csv(const std::string& path, const Schema& schema);
Table parse_csv(const std::string& text, const Schema& schema);

/// Deterministic writer: shortest round-trip decimals, '\n' line endings,
/// fields quoted only when needed.
std::string table_to_csv(const Table& table);
void save_csv(const Table& table, const std::string& path);

/// Headerless all-numeric CSV (external embedding files).
Matrix load_matrix_csv(const std::string& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

std::string read_text_file(const std::string& path, const std::string& missing_code);
void write_text_file(const std::string& path, const std::string& content);

} // namespace cvxs
