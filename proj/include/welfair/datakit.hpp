#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "welfair/dataset.hpp"
#include "welfair/model.hpp"

namespace welfair {

struct CsvSchema {
  std::string label_column;
  std::optional<std::string> group_column;  // values must be 0 or 1
  Task task = Task::regression;
};

struct LoadedCsv {
  Dataset data;
  // rows rejected because a cell was empty or the field count was off
  std::size_t dropped_rows = 0;
};

// Comma-separated UTF-8 with a header row. Feature columns keep header order;
// the homogeneous column is appended last. Rows with missing cells are
// dropped and counted, non-numeric cells raise MalformedNumber naming the
// data row and column.
LoadedCsv load_csv(const std::string& path, const CsvSchema& schema);

// Inverse of load_csv: writes the real feature columns (homogeneous column
// omitted), the label column, and a 0/1 "group" column when groups are
// present. Values serialize with 17 significant digits so a reload is
// bit-exact.
void save_csv(const std::string& path, const Dataset& d);

struct GroupRule {
  std::string column;
  double threshold = 0.0;  // strictly above lands in the second group
};

struct PreprocessConfig {
  bool standardize = true;
  // columns exempt from standardization on top of the automatic binary rule
  std::vector<std::string> exempt;
  bool flip_labels = false;                 // y -> -y
  std::optional<double> target_rescale;     // y -> y / divisor, divisor > 0
  std::optional<GroupRule> group_rule;      // evaluated on raw feature values
};

struct PreprocessResult {
  Dataset data;
  std::vector<std::string> zero_variance;  // flagged and passed through
};

// Standardizes every non-binary feature column to mean 0 and unit population
// variance. A column is binary when its distinct values are exactly {0,1} or
// {-1,1}; those columns and the homogeneous column pass through untouched.
// The group rule reads raw values, before standardization.
PreprocessResult preprocess(const Dataset& d, const PreprocessConfig& config);

struct GeneratedData {
  Dataset data;
  LinearModel truth;
};

// Realizable regression instance: standard-normal features, homogeneous
// column, labels exactly truth . x. Deterministic in the seed.
GeneratedData gen_realizable(std::size_t n, std::size_t k, std::uint64_t seed,
                             double theta_scale = 1.0);

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Shuffled contiguous folds; test sizes differ by at most one, larger folds
// first. Indices within each side come back sorted.
std::vector<FoldSplit> kfold_split(std::size_t n, std::size_t folds,
                                   std::uint64_t seed);

}  // namespace welfair
