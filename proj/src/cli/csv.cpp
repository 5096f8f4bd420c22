// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#include "csv.hpp"

#include <fmt/format.h>

#include <ostream>

namespace nmsparse::cli {

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  std::vector<std::string> fields(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) fields[c] = format_number(m(r, c));
    write_csv_row(out, fields);
  }
}

}  // namespace nmsparse::cli
