#include "welfair/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "welfair/errors.hpp"
#include "welfair/kernels.hpp"

namespace welfair {

namespace {

// Inputs are sorted before transforming and summing so the result depends
// only on the multiset of values: welfare must be exactly invariant under
// profile permutations, which evaluating in profile order is not (both the
// summation order and the simd-versus-tail split would leak position).
double canonical_pow_sum(const std::vector<double>& v, double alpha) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> powered(sorted.size());
  kernels::pow_each(sorted.data(), alpha, powered.data(), sorted.size());
  return kernels::sum(powered.data(), powered.size());
}

double canonical_log_sum(const std::vector<double>& v) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (double& x : sorted) x = std::log(x);
  return kernels::sum(sorted.data(), sorted.size());
}

double alpha_pow_mean(const BenefitProfile& p, double alpha) {
  return canonical_pow_sum(p.values(), alpha) / static_cast<double>(p.size());
}

}  // namespace

double crra_utility(double b, double alpha) {
  if (!(b > 0.0))
    throw NonPositiveBenefit("utility requires a strictly positive benefit");
  if (alpha == 0.0) return std::log(b);
  double p = std::exp(alpha * std::log(b));
  return alpha > 0.0 ? p : -p;
}

double empirical_welfare(const BenefitProfile& profile, double alpha,
                         WelfareConvention convention) {
  double total;
  if (alpha == 0.0) {
    total = canonical_log_sum(profile.values());
  } else {
    total = canonical_pow_sum(profile.values(), alpha);
    if (alpha < 0.0) total = -total;
  }
  if (convention == WelfareConvention::sum) return total;
  return total / static_cast<double>(profile.size());
}

double ede(const BenefitProfile& profile, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw UnsupportedAlpha("equally distributed equivalent needs alpha in (0,1)");
  return std::pow(alpha_pow_mean(profile, alpha), 1.0 / alpha);
}

double atkinson(const BenefitProfile& profile, double beta) {
  if (!(beta >= 0.0))
    throw InvalidArgument("inequality aversion beta must be >= 0");
  double mu = profile.mean();
  double equivalent;
  if (beta == 1.0) {
    // geometric mean
    equivalent = std::exp(canonical_log_sum(profile.values()) /
                          static_cast<double>(profile.size()));
  } else {
    double p = 1.0 - beta;
    equivalent = std::pow(alpha_pow_mean(profile, p), 1.0 / p);
  }
  double a = 1.0 - equivalent / mu;
  // clamp the tiny negative round-off a constant profile can produce
  return a < 0.0 ? 0.0 : a;
}

double generalized_entropy(const BenefitProfile& profile, double ge_alpha) {
  if (ge_alpha == 0.0 || ge_alpha == 1.0)
    throw UnsupportedAlpha(
        "generalized entropy is parameterized away from 0 and 1");
  double n = static_cast<double>(profile.size());
  double mu = profile.mean();
  std::vector<double> scaled(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i)
    scaled[i] = profile.values()[i] / mu;
  double s = canonical_pow_sum(scaled, ge_alpha) - n;
  double g = s / (n * ge_alpha * (ge_alpha - 1.0));
  return g < 0.0 ? 0.0 : g;
}

Ordering leximin_compare(const BenefitProfile& a, const BenefitProfile& b) {
  if (a.size() != b.size())
    throw LengthMismatch("profiles differ in length");
  std::vector<double> sa = a.values();
  std::vector<double> sb = b.values();
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i] < sb[i]) return Ordering::less;
    if (sa[i] > sb[i]) return Ordering::greater;
  }
  return Ordering::equal;
}

std::vector<std::pair<std::string, double>> rank_models(
    const std::vector<std::pair<std::string, BenefitProfile>>& profiles,
    RankMeasure measure) {
  if (!profiles.empty()) {
    std::size_t len = profiles.front().second.size();
    for (const auto& [name, p] : profiles)
      if (p.size() != len)
        throw LengthMismatch("profile " + name + " differs in length");
  }
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(profiles.size());
  bool ascending = measure.kind != RankMeasure::Kind::welfare;
  for (const auto& [name, p] : profiles) {
    double s;
    switch (measure.kind) {
      case RankMeasure::Kind::welfare:
        s = empirical_welfare(p, measure.param);
        break;
      case RankMeasure::Kind::atkinson:
        s = atkinson(p, measure.param);
        break;
      default:
        s = generalized_entropy(p, measure.param);
        break;
    }
    scored.emplace_back(name, s);
  }
  std::sort(scored.begin(), scored.end(),
            [ascending](const auto& a, const auto& b) {
              if (a.second != b.second)
                return ascending ? a.second < b.second : a.second > b.second;
              return a.first < b.first;
            });
  return scored;
}

}  // namespace welfair
