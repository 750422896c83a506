#pragma once

#include <string>
#include <utility>
#include <vector>

#include "welfair/benefits.hpp"

// The one-parameter family of risk-averse welfare measures over benefit
// profiles, the equally-distributed-equivalent benefit level, and the
// Atkinson / generalized-entropy inequality indices derived from it.

namespace welfair {

enum class WelfareConvention { mean, sum };

// alpha > 0: b^alpha; alpha = 0: ln(b); alpha < 0: -b^alpha. b must be > 0.
double crra_utility(double b, double alpha);

// Mean (default) or sum of crra_utility over the profile.
double empirical_welfare(const BenefitProfile& profile, double alpha,
                         WelfareConvention convention = WelfareConvention::mean);

// Constant benefit level with the same welfare as the profile:
// ((1/n) sum b_i^alpha)^(1/alpha), for alpha in (0,1).
double ede(const BenefitProfile& profile, double alpha);

// 1 - EDE/mean with inequality aversion beta >= 0; beta = 1 uses the
// geometric mean, other betas the power mean of exponent 1 - beta.
// Always in [0,1); 0 exactly when the profile is constant.
double atkinson(const BenefitProfile& profile, double beta);

// (1/(n a (a-1))) sum [(b_i/mu)^a - 1] for a outside {0,1}.
double generalized_entropy(const BenefitProfile& profile, double ge_alpha);

enum class Ordering { less, equal, greater };

// Lexicographic comparison of the ascending-sorted profiles (the limiting
// welfare ordering as risk aversion grows without bound).
Ordering leximin_compare(const BenefitProfile& a, const BenefitProfile& b);

struct RankMeasure {
  enum class Kind { welfare, atkinson, ge };
  Kind kind = Kind::welfare;
  double param = 0.5;  // alpha for welfare/ge, beta for atkinson
};

// Scores every named profile and orders best-first: descending for welfare,
// ascending for the inequality indices. Ties break by name.
std::vector<std::pair<std::string, double>> rank_models(
    const std::vector<std::pair<std::string, BenefitProfile>>& profiles,
    RankMeasure measure);

}  // namespace welfair
