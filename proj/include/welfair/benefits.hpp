#pragma once

#include <cstddef>
#include <optional>
#include <vector>

// Benefit functions linear in the predicted value, b(y, yhat) = c_y*yhat +
// d_y, plus the profile type the welfare and inequality measures consume.
// Benefits must stay strictly positive; a spec either rejects non-positive
// values or clamps them at a configured floor.

namespace welfair {

// Default positivity floor used by callers that opt into clamping.
inline constexpr double kBenefitFloor = 1e-8;

enum class LabelDomain { binary01, binaryPM1, continuous };

struct BenefitSpec {
  LabelDomain domain = LabelDomain::continuous;
  // Per-label affine coefficients for the binary domains. The continuous
  // domain ignores these and evaluates yhat - y + 1 (slope 1, offset 1 - y).
  double c0 = 0.0, d0 = 0.0;  // label 0 (or -1)
  double c1 = 0.0, d1 = 0.0;  // label 1 (or +1)
  // When set, evaluated benefits are clamped below at this value instead of
  // being rejected.
  std::optional<double> floor;
};

// b(y, yhat) = yhat - y + 1; perfect prediction gives benefit 1.
BenefitSpec regression_benefit();
BenefitSpec regression_benefit_floored(double floor = kBenefitFloor);

// Prescribed benefit for each (y, yhat) cell of a binary problem on {0,1}.
struct BinaryBenefitTable {
  double b00 = 0.0;  // y=0, yhat=0
  double b01 = 0.0;  // y=0, yhat=1
  double b10 = 0.0;  // y=1, yhat=0
  double b11 = 0.0;  // y=1, yhat=1

  // Advisory ordering b10 < b00 <= b11 < b01; violations are reported by
  // callers, never enforced.
  bool ordering_ok() const;
};

// Unique affine interpolation of the table; the returned spec reproduces all
// four entries exactly on the {0,1} domain.
BenefitSpec fit_binary_benefit(const BinaryBenefitTable& table);

// Relabel a {0,1}-domain spec onto {-1,+1} so that yhat=-1 maps to the old
// yhat=0 cell and yhat=+1 to the old yhat=1 cell.
BenefitSpec to_pm1(const BenefitSpec& spec01);

// c_y*yhat + d_y, or yhat - y + 1 for the continuous domain. Throws
// UnknownLabel for labels outside the domain and NonPositiveBenefit when the
// result is <= 0 and no floor is configured.
double evaluate_benefit(const BenefitSpec& spec, double y, double yhat);

class BenefitProfile {
 public:
  // values must be non-empty and strictly positive
  explicit BenefitProfile(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  double mean() const noexcept { return mean_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
  double mean_;
};

// b_i = evaluate_benefit(spec, labels[i], predictions[i]); error messages
// name the offending index.
BenefitProfile build_profile(const std::vector<double>& predictions,
                             const std::vector<double>& labels,
                             const BenefitSpec& spec);

// a_i >= b_i for every i
bool pareto_dominates(const BenefitProfile& a, const BenefitProfile& b);

}  // namespace welfair
