#pragma once

#include <string>

#include "mssal/types.hpp"

namespace mssal {

// Parse failures and IO failures throw std::runtime_error with the path and,
// for cell-level problems, the 1-based data row and the column name (or
// 1-based column index when there is no header).
DataMatrix read_csv(const std::string& path, bool has_header = true);

// 17 significant digits, so read_csv(write_csv(m)) is bit-exact.
void write_csv(const DataMatrix& data, const std::string& path);

// Single integer column with header "label".
void write_labels(const VectorXi& labels, const std::string& path);

// Reads a single-column file of integers, skipping a non-numeric header row
// if one is present.
VectorXi read_labels(const std::string& path);

}  // namespace mssal
