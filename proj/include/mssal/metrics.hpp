#pragma once

#include <string>
#include <vector>

#include "mssal/types.hpp"

namespace mssal {

// Contingency table between two labelings; rows/columns ordered by first
// appearance of each label in its vector.
struct CrossTab {
    std::vector<int> row_labels;
    std::vector<int> col_labels;
    std::vector<std::vector<long>> counts;
};

// Proportion of agreeing pairs over all C(n,2) pairs; 1.0 for n == 1.
double rand_index(const VectorXi& a, const VectorXi& b);

// Hubert-Arabie adjusted Rand index, exact integer pair counting. When both
// partitions are trivial (expected index equals the maximum index) returns 0
// and sets *degenerate when provided.
double adjusted_rand_index(const VectorXi& a, const VectorXi& b,
                           bool* degenerate = nullptr);

CrossTab cross_tab(const VectorXi& truth, const VectorXi& pred);

std::string format_text(const CrossTab& tab);
std::string format_csv(const CrossTab& tab);

}  // namespace mssal
