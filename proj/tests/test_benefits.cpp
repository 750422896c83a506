#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "testutil.hpp"
#include "welfair/benefits.hpp"
#include "welfair/errors.hpp"
#include "welfair/rng.hpp"

using namespace welfair;

TEST_CASE("binary table fit reproduces the prescribed entries") {
  BinaryBenefitTable t{1.0, 1.5, 0.0, 1.0};
  CHECK(t.ordering_ok());
  BenefitSpec s = fit_binary_benefit(t);
  CHECK(s.c0 == 0.5);
  CHECK(s.d0 == 1.0);
  CHECK(s.c1 == 1.0);
  CHECK(s.d1 == 0.0);
  CHECK(evaluate_benefit(s, 0.0, 0.0) == t.b00);
  CHECK(evaluate_benefit(s, 0.0, 1.0) == t.b01);
  CHECK(evaluate_benefit(s, 1.0, 1.0) == t.b11);

  BinaryBenefitTable flat{1.0, 1.0, 1.0, 1.0};
  CHECK_FALSE(flat.ordering_ok());
  BenefitSpec sf = fit_binary_benefit(flat);
  CHECK(sf.c0 == 0.0);
  CHECK(sf.c1 == 0.0);
  CHECK(sf.d0 == 1.0);
  CHECK(sf.d1 == 1.0);

  BinaryBenefitTable t2{0.5, 2.0, 0.2, 1.0};
  BenefitSpec s2 = fit_binary_benefit(t2);
  CHECK(s2.c0 == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(s2.d0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s2.c1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s2.d1 == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(evaluate_benefit(s2, 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(evaluate_benefit(s2, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(evaluate_benefit(s2, 1.0, 0.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(evaluate_benefit(s2, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("fit is exact on random tables") {
  // entries drawn within a factor of two of each other so every affine
  // coefficient and its re-evaluation round-trips without rounding
  CounterRng rng(11);
  for (int t = 0; t < 1000; ++t) {
    BinaryBenefitTable tab{rng.next_in(1.0, 2.0), rng.next_in(1.0, 2.0),
                           rng.next_in(1.0, 2.0), rng.next_in(1.0, 2.0)};
    BenefitSpec s = fit_binary_benefit(tab);
    CHECK(evaluate_benefit(s, 0.0, 0.0) == tab.b00);
    CHECK(evaluate_benefit(s, 0.0, 1.0) == tab.b01);
    CHECK(evaluate_benefit(s, 1.0, 0.0) == tab.b10);
    CHECK(evaluate_benefit(s, 1.0, 1.0) == tab.b11);
  }
}

TEST_CASE("signed-label relabeling keeps all four cells") {
  BenefitSpec s01 = fit_binary_benefit({1.0, 1.5, 0.0, 1.0});
  BenefitSpec s = to_pm1(s01);
  CHECK(s.c1 == 0.5);
  CHECK(s.d1 == 0.5);
  CHECK(s.c0 == 0.25);
  CHECK(s.d0 == 1.25);
  CHECK(evaluate_benefit(s, 1.0, 1.0) == 1.0);     // true positive
  CHECK(evaluate_benefit(s, -1.0, 1.0) == 1.5);    // false positive
  CHECK(evaluate_benefit(s, -1.0, -1.0) == 1.0);   // true negative
  // false negative is prescribed zero benefit: strict mode rejects it
  CHECK_THROWS_AS(evaluate_benefit(s, 1.0, -1.0), NonPositiveBenefit);
  BenefitSpec floored = s;
  floored.floor = kBenefitFloor;
  CHECK(evaluate_benefit(floored, 1.0, -1.0) == kBenefitFloor);

  CHECK_THROWS_AS(evaluate_benefit(s, 0.25, 1.0), UnknownLabel);
  CHECK_THROWS_AS(evaluate_benefit(s01, -1.0, 1.0), UnknownLabel);
  CHECK_THROWS_AS(to_pm1(regression_benefit()), InvalidArgument);
}

TEST_CASE("regression benefit is prediction minus target plus one") {
  BenefitSpec s = regression_benefit();
  CHECK(evaluate_benefit(s, 0.3, 0.3) == 1.0);
  CHECK(evaluate_benefit(s, 0.2, 0.5) == doctest::Approx(1.3).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate_benefit(s, 2.0, 0.5), NonPositiveBenefit);
  CHECK(evaluate_benefit(regression_benefit_floored(), 2.0, 0.5) ==
        kBenefitFloor);
}

TEST_CASE("benefit is affine in the prediction") {
  CounterRng rng(12);
  BenefitSpec reg = regression_benefit();
  for (int t = 0; t < 500; ++t) {
    // predictions kept at or above the target so benefits stay positive
    double y = rng.next_in(-2.0, 2.0);
    double y1 = y + rng.next_in(0.0, 4.0);
    double y2 = y + rng.next_in(0.0, 4.0);
    double w = rng.next_unit();
    double lhs = evaluate_benefit(reg, y, w * y1 + (1.0 - w) * y2);
    double rhs = w * evaluate_benefit(reg, y, y1) +
                 (1.0 - w) * evaluate_benefit(reg, y, y2);
    CHECK(testutil::close(lhs, rhs, 1e-12, 1e-12));
  }
}

TEST_CASE("profiles expose values and a consistent mean") {
  BenefitProfile p({0.6, 1.0, 1.0, 1.1});
  CHECK(p.size() == 4);
  CHECK(p.mean() == doctest::Approx(0.925).epsilon(1e-12));

  CHECK_THROWS_AS(BenefitProfile({}), EmptyProfile);
  CHECK_THROWS_AS(BenefitProfile({1.0, 0.0}), NonPositiveBenefit);
  CHECK_THROWS_AS(BenefitProfile({1.0, -0.5}), NonPositiveBenefit);

  CounterRng rng(13);
  for (int t = 0; t < 200; ++t) {
    auto v = testutil::positive_vec(rng, 1 + rng.next_index(50), 1e-3, 1e3);
    BenefitProfile q(v);
    long double m = 0.0L;
    for (double x : v) m += x;
    m /= static_cast<long double>(v.size());
    CHECK(testutil::close(q.mean(), static_cast<double>(m), 1e-12,
                          1e-12));
  }
}

TEST_CASE("profile construction from predictions") {
  std::vector<double> labels = {1.0, 1.0, 1.0, 1.0};
  BenefitProfile a =
      build_profile({0.9, 0.9, 0.9, 0.9}, labels, regression_benefit());
  CHECK(a.values() == std::vector<double>{0.9, 0.9, 0.9, 0.9});
  CHECK(a.mean() == doctest::Approx(0.9).epsilon(1e-15));

  BenefitProfile b =
      build_profile({0.6, 1.0, 1.0, 1.1}, labels, regression_benefit());
  CHECK(b.values() == std::vector<double>{0.6, 1.0, 1.0, 1.1});
  CHECK(b.mean() == doctest::Approx(0.925).epsilon(1e-12));

  CHECK_THROWS_AS(build_profile({}, {}, regression_benefit()), EmptyProfile);
  CHECK_THROWS_AS(build_profile({1.0}, {1.0, 2.0}, regression_benefit()),
                  LengthMismatch);
  try {
    build_profile({0.5, -2.0}, {0.0, 0.0}, regression_benefit());
    FAIL("expected rejection of the non-positive benefit");
  } catch (const NonPositiveBenefit& e) {
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
}

TEST_CASE("domination compares componentwise") {
  BenefitProfile hi({1.0, 2.0}), lo({1.0, 1.0});
  CHECK(pareto_dominates(hi, lo));
  CHECK_FALSE(pareto_dominates(lo, hi));
  CHECK(pareto_dominates(lo, lo));

  BenefitProfile a({0.9, 0.9, 0.9, 0.9}), b({0.6, 1.0, 1.0, 1.1});
  CHECK_FALSE(pareto_dominates(a, b));
  CHECK_FALSE(pareto_dominates(b, a));

  CHECK_THROWS_AS(pareto_dominates(hi, BenefitProfile({1.0})), LengthMismatch);
}

TEST_CASE("domination is a partial order") {
  CounterRng rng(14);
  for (int t = 0; t < 500; ++t) {
    std::size_t n = 1 + rng.next_index(20);
    auto c = testutil::positive_vec(rng, n, 0.1, 10.0);
    auto b = c;
    for (auto& x : b) x += rng.next_in(0.0, 2.0);
    auto a = b;
    for (auto& x : a) x += rng.next_in(0.0, 2.0);
    BenefitProfile pa(a), pb(b), pc(c);
    CHECK(pareto_dominates(pa, pa));  // reflexive
    CHECK(pareto_dominates(pa, pb));
    CHECK(pareto_dominates(pb, pc));
    CHECK(pareto_dominates(pa, pc));  // transitive along the chain
    if (pareto_dominates(pc, pa)) CHECK(a == c);  // antisymmetry
  }
}
