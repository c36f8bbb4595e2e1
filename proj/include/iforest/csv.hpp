#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "iforest/core.hpp"

namespace iforest {

/// Shared dataset CSV: one row per sample, k feature columns of decimal
/// reals followed by one 0/1 label column. Lines starting with '#' and blank
/// lines are skipped.
Dataset load_dataset_csv(const std::string& path);

/// Writes the shared format with a '#' header row. Reals use the shortest
/// representation that parses back exactly.
void save_dataset_csv(const Dataset& data, const std::string& path);

/// Raw numeric table (no label column); used for unlabeled prediction input.
struct FeatureTable {
    std::vector<double> values; // row-major
    std::size_t rows = 0;
    std::size_t cols = 0;
};

FeatureTable load_feature_table_csv(const std::string& path);

/// Shortest decimal form of x that parses back to the same double.
std::string format_double(double x);

} // namespace iforest
