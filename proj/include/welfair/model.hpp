#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "welfair/dataset.hpp"

namespace welfair {

// Linear predictor over the feature matrix, homogeneous coordinate included.
// Classification models produce raw scores; thresholding is the caller's job.
struct LinearModel {
  Task task = Task::regression;
  std::vector<double> weights;

  std::size_t k() const { return weights.size(); }

  // Raw scores X w. Throws LengthMismatch when the widths disagree.
  std::vector<double> predict(const Dataset& d) const;
  double predict_one(const double* x) const;
};

// Free-form provenance written alongside the weights (training parameters,
// solver status). Keys are single tokens; values run to end of line.
using ModelMeta = std::vector<std::pair<std::string, std::string>>;

// Text format, value serialization round-trips bit-exactly.
void save_model(const std::string& path, const LinearModel& m,
                const ModelMeta& meta = {});
LinearModel load_model(const std::string& path, ModelMeta* meta = nullptr);

}  // namespace welfair
