#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

// In-memory dataset: row-major feature matrix in homogeneous form (the last
// column is identically 1, so the model's last weight is the intercept),
// labels, and an optional two-group split.

namespace welfair {

enum class Task { regression, classification };

enum class Group : unsigned char { g1 = 0, g2 = 1 };

struct GroupAssignment {
  std::vector<Group> membership;

  std::size_t count(Group g) const {
    std::size_t c = 0;
    for (Group m : membership)
      if (m == g) ++c;
    return c;
  }
};

struct Dataset {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> X;  // n x k, row-major; column k-1 is the constant 1
  std::vector<double> y;  // regression: finite reals; classification: -1/+1
  std::optional<GroupAssignment> groups;
  Task task = Task::regression;
  std::vector<std::string> feature_names;  // size k, last names the constant
  std::string label_name = "y";

  const double* row(std::size_t i) const { return X.data() + i * k; }

  // Throws on any structural violation: shape mismatches, a non-constant
  // homogeneous column, non-finite values, labels outside {-1,+1} for
  // classification, or a group assignment of the wrong length.
  void validate() const;
};

// New dataset holding the given rows (in the given order).
Dataset subset(const Dataset& d, const std::vector<std::size_t>& indices);

}  // namespace welfair
