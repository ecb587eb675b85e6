#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "storeopt/problem.hpp"

namespace storeopt {
namespace {

CoreProblem make(std::vector<double> a, std::vector<double> b,
                 std::vector<double> u, std::vector<double> c = {}) {
  if (c.empty()) c.assign(a.size(), 1.0);
  return CoreProblem(std::move(a), std::move(b), std::move(u), std::move(c));
}

TEST(CoreProblem, RejectsMalformedInstances) {
  EXPECT_THROW(make({}, {}, {}), DimensionError);
  EXPECT_THROW(make({0, 0}, {1}, {1, 1}, {1, 1}), DimensionError);
  EXPECT_THROW(make({2}, {1}, {1}), DomainError);
  EXPECT_THROW(make({0}, {1}, {-1}), DomainError);
}

TEST(Objective, InnerProduct) {
  const auto p = make({0, 0, 0}, {9, 9, 9}, {9, 9, 9}, {1, 2, 3});
  const std::vector<double> zero{0, 0, 0};
  EXPECT_EQ(objective(p, zero), 0.0);

  const auto single = make({0}, {9}, {9}, {2});
  const std::vector<double> three{3};
  EXPECT_EQ(objective(single, three), 6.0);

  const auto mixed = make({0, 0, 0}, {9, 9, 9}, {9, 9, 9}, {0.5, -1, 2});
  const std::vector<double> x{2, 1, 1};
  EXPECT_EQ(objective(mixed, x), 2.0);
}

TEST(Objective, LengthMismatchThrows) {
  const auto p = make({0, 0}, {1, 1}, {1, 1});
  const std::vector<double> x{1};
  EXPECT_THROW(objective(p, x), DimensionError);
  EXPECT_THROW(check_feasible(p, x, 0.0), DimensionError);
}

TEST(CheckFeasible, Examples) {
  {
    const auto p = make({0}, {5}, {2});
    const std::vector<double> x{1};
    const auto r = check_feasible(p, x, 0.0);
    EXPECT_TRUE(r.feasible);
    EXPECT_EQ(r.residual, 0.0);
  }
  {
    const auto p = make({2}, {5}, {2});
    const std::vector<double> x{1};
    const auto r = check_feasible(p, x, 0.0);
    EXPECT_FALSE(r.feasible);
    EXPECT_EQ(r.index, 0u);
    EXPECT_EQ(r.kind, ViolationKind::kCumulativeLower);
    EXPECT_EQ(r.residual, 1.0);
  }
  {
    const auto p = make({0, 3}, {2, 4}, {3, 3});
    const std::vector<double> x{2, 2};
    EXPECT_TRUE(check_feasible(p, x, 0.0).feasible);
  }
}

TEST(CheckFeasible, ReportsWorstViolation) {
  const auto p = make({0, 0}, {10, 10}, {1, 1});
  const std::vector<double> x{1.5, -0.25};
  const auto r = check_feasible(p, x, 0.1);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.kind, ViolationKind::kChargeCap);
  EXPECT_EQ(r.index, 0u);
  EXPECT_DOUBLE_EQ(r.residual, 0.5);
  EXPECT_TRUE(check_feasible(p, x, 0.5).feasible);
}

TEST(FeasiblePoint, Examples) {
  EXPECT_FALSE(instance_has_feasible_point(make({3}, {5}, {2})));
  EXPECT_EQ(first_unreachable_bound(make({3}, {5}, {2})), 0u);
  EXPECT_TRUE(instance_has_feasible_point(make({0, 2}, {5, 5}, {1, 1})));
  EXPECT_TRUE(instance_has_feasible_point(make({0}, {0}, {5})));
}

TEST(FeasiblePoint, EarliestFillRespectsLaterUpperBounds) {
  // b_2 = 1 caps the first prefix as well.
  const auto p = make({0, 1}, {5, 1}, {3, 3});
  const auto x = earliest_fill(p);
  EXPECT_EQ(x[0], 1.0);
  EXPECT_EQ(x[1], 0.0);
  EXPECT_TRUE(instance_has_feasible_point(p));
}

TEST(FeasiblePoint, NegativeUpperBoundIsInfeasible) {
  const auto p = make({-3, -2}, {-1, 4}, {1, 1});
  EXPECT_FALSE(instance_has_feasible_point(p));
  EXPECT_EQ(first_unreachable_bound(p), 0u);
}

// Integer data makes the interval constraint matrix yield integral vertices,
// so enumerating integer charges decides feasibility exactly.
bool feasible_by_enumeration(const CoreProblem& p) {
  const std::size_t n = p.size();
  std::vector<double> x(n, 0.0);
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return check_feasible(p, x, 0.0).feasible;
    for (int v = 0; v <= static_cast<int>(p.caps()[i]); ++v) {
      x[i] = v;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

TEST(FeasiblePoint, AgreesWithEnumeration) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> len(1, 4);
  std::uniform_int_distribution<int> cap(0, 3);
  std::uniform_int_distribution<int> lo(-2, 6);
  std::uniform_int_distribution<int> width(0, 4);
  int feasible = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = len(rng);
    std::vector<double> a(n), b(n), u(n), c(n, 1.0);
    for (int i = 0; i < n; ++i) {
      a[i] = lo(rng);
      b[i] = a[i] + width(rng);
      u[i] = cap(rng);
    }
    const CoreProblem p(a, b, u, c);
    const bool expected = feasible_by_enumeration(p);
    feasible += expected ? 1 : 0;
    ASSERT_EQ(instance_has_feasible_point(p), expected) << "trial " << trial;
  }
  // Both outcomes must be exercised.
  EXPECT_GT(feasible, 100);
  EXPECT_LT(feasible, 1900);
}

}  // namespace
}  // namespace storeopt
