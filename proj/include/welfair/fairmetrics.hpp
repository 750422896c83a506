#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "welfair/benefits.hpp"
#include "welfair/dataset.hpp"

// Group- and similarity-based fairness measures over predictions, plus the
// aggregate per-model report the results table is built from.

namespace welfair {

enum class DistanceMode { normalized_euclidean, label_distance };

// Symmetric pairwise distances. Stored densely up to dense_cap rows; larger
// inputs keep the source points and recompute rows on demand, so memory stays
// O(n) at identical numerical results.
class DistanceMatrix {
 public:
  // Euclidean distance between feature rows, divided by the maximum pairwise
  // distance (so the largest entry is exactly 1). Throws DegenerateData when
  // all points coincide, TooFewRows for n < 2.
  static DistanceMatrix from_features(const double* X, std::size_t n,
                                      std::size_t k,
                                      std::size_t dense_cap = 10000);
  static DistanceMatrix from_features(const Dataset& d,
                                      std::size_t dense_cap = 10000);

  // d(i,j) = |y_i - y_j|, unnormalized.
  static DistanceMatrix from_labels(const std::vector<double>& y,
                                    std::size_t dense_cap = 10000);

  std::size_t size() const noexcept { return n_; }
  DistanceMode mode() const noexcept { return mode_; }
  bool dense() const noexcept { return !dense_.empty(); }

  double at(std::size_t i, std::size_t j) const;
  // Writes all n entries of row i.
  void row(std::size_t i, double* out) const;

 private:
  DistanceMatrix() = default;
  double compute(std::size_t i, std::size_t j) const;

  DistanceMode mode_ = DistanceMode::label_distance;
  std::size_t n_ = 0, k_ = 0;
  std::vector<double> dense_;   // n*n when within the cap
  std::vector<double> points_;  // features (n*k) or labels (n) otherwise
  double inv_scale_ = 1.0;      // 1 / max pairwise distance in normalized mode
};

// Average positive part of |p_i - p_j| - d(i,j) over unordered pairs; zero
// when there are fewer than two predictions.
double dwork_violation(const std::vector<double>& predictions,
                       const DistanceMatrix& d);

// |share of +1 predictions in G1 - share in G2|; predictions must be hard
// -1/+1 labels.
double demographic_parity_diff(const std::vector<double>& hard_predictions,
                               const GroupAssignment& groups);

enum class RateKind { fpr, fnr };

// Absolute difference of per-group conditional error rates. Throws
// UndefinedRate when a group has no instance with the conditioning label.
double error_rate_diff(RateKind kind,
                       const std::vector<double>& hard_predictions,
                       const std::vector<double>& labels,
                       const GroupAssignment& groups);

// |mean prediction in G1 - mean prediction in G2|
double mean_diff(const std::vector<double>& predictions,
                 const GroupAssignment& groups);

enum class ResidualSign { positive, negative };

// Per-group mean over-prediction (positive) or under-prediction (negative),
// averaged over the group's strictly violating members only; a group with no
// violating member contributes 0 and sets *degenerate when provided.
double residual_diff(ResidualSign sign, const std::vector<double>& predictions,
                     const std::vector<double>& labels,
                     const GroupAssignment& groups,
                     bool* degenerate = nullptr);

struct MetricsReport {
  double loss = 0.0;  // mean squared error, or mean logistic loss
  std::optional<double> accuracy;  // classification only
  double welfare = 0.0;
  double atkinson = 0.0;
  double ge = 0.0;
  double dwork = 0.0;
  std::optional<double> demographic_parity;
  std::optional<double> fpr_diff;  // absent when a conditioning set is empty
  std::optional<double> fnr_diff;
  std::optional<double> mean_diff;
  std::optional<double> pos_residual_diff;
  std::optional<double> neg_residual_diff;
  bool pos_residual_degenerate = false;
  bool neg_residual_degenerate = false;
};

struct ReportConfig {
  double alpha = 0.5;     // welfare risk parameter
  double beta = 0.5;      // inequality aversion
  double ge_alpha = 2.0;  // generalized-entropy parameter
  // Benefit spec override; defaults to the task's standard benefit. Reports
  // always clamp benefits at benefit_floor so a single zero-benefit
  // prediction cannot abort a whole report.
  std::optional<BenefitSpec> benefit;
  double benefit_floor = kBenefitFloor;
  std::size_t distance_cap = 10000;
};

// One row of metrics for a prediction vector. Predictions are raw scores;
// classification metrics that need hard labels use sign(score) with
// sign(0) = +1. Group metrics are absent when the dataset has no groups;
// demographic parity and the error-rate differences additionally require a
// classification task.
MetricsReport full_report(const Dataset& data,
                          const std::vector<double>& predictions,
                          const ReportConfig& config = {});

// The benefit table behind the default classification report: benefit 1 for
// correct predictions, 1.5 for false positives, 0 for false negatives.
BinaryBenefitTable default_classification_table();

// Hard -1/+1 labels from raw scores, sign(0) = +1.
std::vector<double> hard_labels(const std::vector<double>& scores);

}  // namespace welfair
