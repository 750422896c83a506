#include "welfair/benefits.hpp"

#include <cmath>
#include <string>

#include "welfair/errors.hpp"
#include "welfair/kernels.hpp"

namespace welfair {

BenefitSpec regression_benefit() {
  BenefitSpec s;
  s.domain = LabelDomain::continuous;
  return s;
}

BenefitSpec regression_benefit_floored(double floor) {
  BenefitSpec s = regression_benefit();
  s.floor = floor;
  return s;
}

bool BinaryBenefitTable::ordering_ok() const {
  return b10 < b00 && b00 <= b11 && b11 < b01;
}

BenefitSpec fit_binary_benefit(const BinaryBenefitTable& t) {
  BenefitSpec s;
  s.domain = LabelDomain::binary01;
  s.c0 = t.b01 - t.b00;
  s.d0 = t.b00;
  s.c1 = t.b11 - t.b10;
  s.d1 = t.b10;
  return s;
}

BenefitSpec to_pm1(const BenefitSpec& spec01) {
  if (spec01.domain != LabelDomain::binary01)
    throw InvalidArgument("relabeling expects a {0,1}-domain benefit spec");
  // yhat01 = (yhat_pm + 1)/2 substituted into c*yhat01 + d
  BenefitSpec s = spec01;
  s.domain = LabelDomain::binaryPM1;
  s.c0 = spec01.c0 / 2.0;
  s.d0 = spec01.c0 / 2.0 + spec01.d0;
  s.c1 = spec01.c1 / 2.0;
  s.d1 = spec01.c1 / 2.0 + spec01.d1;
  return s;
}

double evaluate_benefit(const BenefitSpec& spec, double y, double yhat) {
  double v;
  switch (spec.domain) {
    case LabelDomain::continuous:
      v = yhat - y + 1.0;
      break;
    case LabelDomain::binary01:
      if (y == 0.0)
        v = spec.c0 * yhat + spec.d0;
      else if (y == 1.0)
        v = spec.c1 * yhat + spec.d1;
      else
        throw UnknownLabel("label " + std::to_string(y) +
                           " outside {0,1} benefit domain");
      break;
    case LabelDomain::binaryPM1:
      if (y == -1.0)
        v = spec.c0 * yhat + spec.d0;
      else if (y == 1.0)
        v = spec.c1 * yhat + spec.d1;
      else
        throw UnknownLabel("label " + std::to_string(y) +
                           " outside {-1,+1} benefit domain");
      break;
    default:
      throw InvalidArgument("unknown benefit label domain");
  }
  if (spec.floor) return v < *spec.floor ? *spec.floor : v;
  if (v <= 0.0)
    throw NonPositiveBenefit("benefit " + std::to_string(v) +
                             " is not strictly positive");
  return v;
}

BenefitProfile::BenefitProfile(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw EmptyProfile("benefit profile must be non-empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
      throw NonPositiveBenefit("profile value at index " + std::to_string(i) +
                               " is not strictly positive");
  }
  mean_ = kernels::sum(values_.data(), values_.size()) /
          static_cast<double>(values_.size());
}

BenefitProfile build_profile(const std::vector<double>& predictions,
                             const std::vector<double>& labels,
                             const BenefitSpec& spec) {
  if (predictions.size() != labels.size())
    throw LengthMismatch("predictions and labels differ in length");
  if (predictions.empty())
    throw EmptyProfile("cannot build a benefit profile from empty input");
  std::vector<double> values(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    try {
      values[i] = evaluate_benefit(spec, labels[i], predictions[i]);
    } catch (const NonPositiveBenefit& e) {
      throw NonPositiveBenefit(std::string(e.what()) + " (index " +
                               std::to_string(i) + ")");
    }
  }
  return BenefitProfile(std::move(values));
}

bool pareto_dominates(const BenefitProfile& a, const BenefitProfile& b) {
  if (a.size() != b.size())
    throw LengthMismatch("profiles differ in length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.values()[i] < b.values()[i]) return false;
  return true;
}

}  // namespace welfair
