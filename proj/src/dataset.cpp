#include "welfair/dataset.hpp"

#include <cmath>
#include <string>

#include "welfair/errors.hpp"

namespace welfair {

void Dataset::validate() const {
  if (k < 1) throw InvalidArgument("dataset needs at least the constant column");
  if (X.size() != n * k)
    throw LengthMismatch("feature matrix size does not match n*k");
  if (y.size() != n) throw LengthMismatch("label count does not match n");
  if (!feature_names.empty() && feature_names.size() != k)
    throw LengthMismatch("feature name count does not match k");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      if (!std::isfinite(X[i * k + j]))
        throw MalformedNumber("non-finite feature at row " + std::to_string(i));
    if (X[i * k + (k - 1)] != 1.0)
      throw InvalidArgument("homogeneous column is not 1 at row " +
                            std::to_string(i));
    if (task == Task::classification) {
      if (y[i] != 1.0 && y[i] != -1.0)
        throw UnknownLabel("classification label at row " + std::to_string(i) +
                           " is not -1 or +1");
    } else if (!std::isfinite(y[i])) {
      throw MalformedNumber("non-finite label at row " + std::to_string(i));
    }
  }
  if (groups && groups->membership.size() != n)
    throw LengthMismatch("group assignment length does not match n");
}

Dataset subset(const Dataset& d, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.n = indices.size();
  out.k = d.k;
  out.task = d.task;
  out.feature_names = d.feature_names;
  out.label_name = d.label_name;
  out.X.resize(out.n * out.k);
  out.y.resize(out.n);
  if (d.groups) out.groups = GroupAssignment{};
  for (std::size_t r = 0; r < indices.size(); ++r) {
    std::size_t i = indices[r];
    if (i >= d.n) throw InvalidArgument("subset index out of range");
    for (std::size_t j = 0; j < d.k; ++j) out.X[r * d.k + j] = d.X[i * d.k + j];
    out.y[r] = d.y[i];
    if (d.groups) out.groups->membership.push_back(d.groups->membership[i]);
  }
  return out;
}

}  // namespace welfair
