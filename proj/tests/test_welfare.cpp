#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "properties.hpp"
#include "testutil.hpp"
#include "welfair/errors.hpp"
#include "welfair/welfare.hpp"

using namespace welfair;

namespace {
const std::vector<double> kProfileA = {0.9, 0.9, 0.9, 0.9};
const std::vector<double> kProfileB = {0.6, 1.0, 1.0, 1.1};
}  // namespace

TEST_CASE("utility branches by risk parameter") {
  CHECK(crra_utility(1.0, 0.5) == 1.0);
  CHECK(crra_utility(1.0, 0.0) == 0.0);
  CHECK(crra_utility(1.0, -1.0) == -1.0);
  CHECK(crra_utility(0.9, 0.5) == doctest::Approx(0.94868).epsilon(1e-4));
  CHECK(crra_utility(4.0, -1.0) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(crra_utility(std::exp(1.0), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(crra_utility(0.0, 0.5), NonPositiveBenefit);
  CHECK_THROWS_AS(crra_utility(-1.0, 0.5), NonPositiveBenefit);
}

TEST_CASE("mean welfare of the two four-person profiles") {
  BenefitProfile a(kProfileA), b(kProfileB);
  CHECK(empirical_welfare(a, 0.5) == doctest::Approx(0.9487).epsilon(2e-4));
  CHECK(empirical_welfare(b, 0.5) == doctest::Approx(0.9559).epsilon(2e-4));
  // frozen reference values, extended precision
  CHECK(empirical_welfare(a, 0.5) ==
        doctest::Approx(0.94868329805051380).epsilon(1e-12));
  CHECK(empirical_welfare(b, 0.5) ==
        doctest::Approx(0.955851379352908731).epsilon(1e-12));

  BenefitProfile ones({1.0, 1.0, 1.0});
  CHECK(empirical_welfare(ones, 0.7) == 1.0);
  CHECK(empirical_welfare(ones, 0.7, WelfareConvention::sum) == 3.0);

  CounterRng rng(21);
  for (int t = 0; t < 200; ++t) {
    auto v = testutil::positive_vec(rng, 2 + rng.next_index(30), 0.05, 20.0);
    for (double alpha : {-1.5, -0.5, 0.0, 0.3, 0.8, 2.0}) {
      CHECK(testutil::close(empirical_welfare(BenefitProfile(v), alpha),
                            oracle::welfare_mean(v, alpha), 1e-11, 1e-11));
    }
  }
}

TEST_CASE("equally distributed equivalent") {
  BenefitProfile c({1.7, 1.7, 1.7});
  CHECK(ede(c, 0.5) == doctest::Approx(1.7).epsilon(1e-13));
  CHECK(ede(BenefitProfile({1.0, 4.0}), 0.5) ==
        doctest::Approx(2.25).epsilon(1e-13));
  CHECK(ede(BenefitProfile(kProfileB), 0.5) ==
        doctest::Approx(0.913651859410858236).epsilon(1e-12));
  // oracle recomputation: square of the mean of square roots
  double m = (std::sqrt(0.6) + std::sqrt(1.0) + std::sqrt(1.0) + std::sqrt(1.1)) / 4.0;
  CHECK(ede(BenefitProfile(kProfileB), 0.5) ==
        doctest::Approx(m * m).epsilon(1e-13));
  CHECK_THROWS_AS(ede(c, 0.0), UnsupportedAlpha);
  CHECK_THROWS_AS(ede(c, 1.0), UnsupportedAlpha);
  CHECK_THROWS_AS(ede(c, 1.5), UnsupportedAlpha);
}

TEST_CASE("inequality index from the equivalent benefit") {
  CHECK(atkinson(BenefitProfile({2.0, 2.0, 2.0}), 0.5) <= 1e-12);
  CHECK(atkinson(BenefitProfile(kProfileB), 0.5) ==
        doctest::Approx(0.0122682600963694751).epsilon(1e-12));
  // composition of the equivalent-benefit oracle with the mean
  CHECK(atkinson(BenefitProfile(kProfileB), 0.5) ==
        doctest::Approx(1.0 - oracle::ede(kProfileB, 0.5) / 0.925)
            .epsilon(1e-12));
  // geometric-mean branch: equivalent benefit sqrt(1*4) = 2, mean 2.5
  CHECK(atkinson(BenefitProfile({1.0, 4.0}), 1.0) ==
        doctest::Approx(0.2).epsilon(1e-13));
  CHECK_THROWS_AS(atkinson(BenefitProfile({1.0}), -0.5), InvalidArgument);

  CounterRng rng(22);
  for (int t = 0; t < 300; ++t) {
    auto v = testutil::positive_vec(rng, 2 + rng.next_index(30), 0.05, 20.0);
    double beta = rng.next_in(0.0, 3.0);
    double a = atkinson(BenefitProfile(v), beta);
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
    CHECK(testutil::close(a, oracle::atkinson(v, beta), 1e-11, 1e-11));
  }
  // zero exactly on constant profiles
  CHECK(atkinson(BenefitProfile({0.37, 0.37, 0.37, 0.37}), 2.3) <= 1e-12);
}

TEST_CASE("generalized entropy") {
  CHECK(generalized_entropy(BenefitProfile({5.0, 5.0}), 2.0) == 0.0);
  CHECK(generalized_entropy(BenefitProfile({1.0, 3.0}), 2.0) ==
        doctest::Approx(0.125).epsilon(1e-13));
  CHECK(generalized_entropy(BenefitProfile(kProfileB), 2.0) ==
        doctest::Approx(0.0215485756026296567).epsilon(1e-12));
  CHECK_THROWS_AS(generalized_entropy(BenefitProfile({1.0}), 0.0),
                  UnsupportedAlpha);
  CHECK_THROWS_AS(generalized_entropy(BenefitProfile({1.0}), 1.0),
                  UnsupportedAlpha);

  CounterRng rng(23);
  for (int t = 0; t < 300; ++t) {
    auto v = testutil::positive_vec(rng, 2 + rng.next_index(30), 0.05, 20.0);
    for (double a : {-1.0, 0.3, 2.0, 3.0}) {
      double g = generalized_entropy(BenefitProfile(v), a);
      CHECK(g >= 0.0);
      CHECK(testutil::close(g, oracle::gen_entropy(v, a), 1e-11, 1e-11));
    }
  }
}

TEST_CASE("leximin ordering") {
  BenefitProfile ab({1.0, 2.0}), ba({2.0, 1.0});
  CHECK(leximin_compare(ab, ba) == Ordering::equal);
  CHECK(leximin_compare(BenefitProfile(kProfileB), BenefitProfile(kProfileA)) ==
        Ordering::less);
  CHECK(leximin_compare(BenefitProfile({1.0, 5.0}), BenefitProfile({1.0, 3.0})) ==
        Ordering::greater);
  CHECK_THROWS_AS(leximin_compare(ab, BenefitProfile({1.0})), LengthMismatch);
}

TEST_CASE("model ranking across measures") {
  std::vector<std::pair<std::string, BenefitProfile>> models = {
      {"A", BenefitProfile({0.8, 0.8, 0.8, 0.8, 0.8})},
      {"B", BenefitProfile({0.5, 0.6, 0.8, 0.9, 1.2})},
      {"C", BenefitProfile({1.0, 1.0, 1.0, 1.0, 1.0})},
      {"D", BenefitProfile({0.78, 0.9, 0.92, 1.1, 1.3})},
  };
  auto ranked = rank_models(models, {RankMeasure::Kind::welfare, 0.5});
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].first == "C");
  CHECK(ranked[1].first == "D");
  CHECK(ranked[2].first == "A");
  CHECK(ranked[3].first == "B");

  // ties break by name
  auto tied = rank_models({{"z", BenefitProfile({1.0, 2.0})},
                           {"y", BenefitProfile({2.0, 1.0})}},
                          {RankMeasure::Kind::welfare, 0.5});
  CHECK(tied[0].first == "y");
  CHECK(tied[0].second == tied[1].second);

  CHECK_THROWS_AS(rank_models({{"a", BenefitProfile({1.0})},
                               {"b", BenefitProfile({1.0, 2.0})}},
                              {RankMeasure::Kind::welfare, 0.5}),
                  LengthMismatch);

  // on equal-mean pairs the welfare order (descending) and the inequality
  // order (ascending) name the same best model: the welfare score direction
  // is the inequality score direction reversed
  CounterRng rng(24);
  for (int t = 0; t < 200; ++t) {
    auto v1 = testutil::positive_vec(rng, 6, 0.1, 10.0);
    auto v2 = testutil::positive_vec(rng, 6, 0.1, 10.0);
    double scale = properties::oracle_mean(v1) / properties::oracle_mean(v2);
    for (auto& x : v2) x *= scale;
    std::vector<std::pair<std::string, BenefitProfile>> pair = {
        {"p", BenefitProfile(v1)}, {"q", BenefitProfile(v2)}};
    auto by_w = rank_models(pair, {RankMeasure::Kind::welfare, 0.5});
    auto by_a = rank_models(pair, {RankMeasure::Kind::atkinson, 0.5});
    CHECK(by_w[0].first == by_a[0].first);
    CHECK(by_w[1].first == by_a[1].first);
  }
}

TEST_CASE("welfare axioms hold on randomized trials") {
  CHECK(properties::monotonicity_failures(300, 101) == 0);
  CHECK(properties::symmetry_failures(300, 102) == 0);
  CHECK(properties::independence_failures(300, 103) == 0);
  CHECK(properties::scale_ordering_failures(300, 104) == 0);
  CHECK(properties::pigou_dalton_failures(300, 105) == 0);
}

TEST_CASE("inequality and welfare orderings are linked") {
  for (double alpha : {0.2, 0.5, 0.8}) {
    CAPTURE(alpha);
    CHECK(properties::equal_mean_order_failures(300, 106, alpha) == 0);
    CHECK(properties::ge_atkinson_order_failures(300, 107, alpha) == 0);
  }
  CHECK(properties::identity_max_gap(300, 108, {0.2, 0.5, 0.8}) <= 1e-10);
}
