// Copyright 2026 The nmsparse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nmsparse/dense_matrix.hpp"

namespace nmsparse::cli {

/// Shortest round-trippable-enough form used in every CSV: 12 significant
/// digits, '.' decimal point, no locale.
std::string format_number(double v);

/// RFC-4180 quoting: only fields containing ',', '"' or a newline are quoted.
std::string csv_field(std::string_view text);

/// One record terminated by '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Headerless numeric matrix, one record per row.
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);

}  // namespace nmsparse::cli
