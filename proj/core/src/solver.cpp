#include "storeopt/solver.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace storeopt {

PriceOrder price_order(std::span<const double> prices) {
  if (prices.empty()) throw DimensionError("price sequence is empty");
  PriceOrder order;
  order.sigma.resize(prices.size());
  std::iota(order.sigma.begin(), order.sigma.end(), std::size_t{0});
  std::stable_sort(order.sigma.begin(), order.sigma.end(),
                   [&](std::size_t l, std::size_t r) {
                     return prices[l] < prices[r];
                   });
  return order;
}

std::uint64_t flop_bound(std::size_t n) noexcept {
  const auto m = static_cast<std::uint64_t>(n);
  return m * m + 3 * m;
}

std::uint64_t comparison_bound(std::size_t n) noexcept {
  // 1.5 n^2 + 2.5 n, exact in integers.
  const auto m = static_cast<std::uint64_t>(n);
  return (3 * m * m + 5 * m) / 2;
}

namespace {

// Counting policy: a no-op for plain solves, a tally for solve_counted.
struct NoCount {
  void flops(std::uint64_t) noexcept {}
  void comparisons(std::uint64_t) noexcept {}
};

struct Tally {
  OpCounts counts;
  void flops(std::uint64_t k) noexcept { counts.flops += k; }
  void comparisons(std::uint64_t k) noexcept { counts.comparisons += k; }
};

[[noreturn]] void throw_infeasible(const CoreProblem& problem) {
  const std::size_t i = first_unreachable_bound(problem);
  std::ostringstream msg;
  msg << "instance has no feasible charge vector: cumulative bound at "
         "interval "
      << i << " cannot be met";
  throw InfeasibleError(msg.str(), i);
}

void check_order(const CoreProblem& problem, const PriceOrder& order) {
  const std::size_t n = problem.size();
  if (order.sigma.size() != n) {
    throw DimensionError("price order length differs from problem size");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t i : order.sigma) {
    if (i >= n || seen[i]) {
      throw DomainError("price order is not a permutation");
    }
    seen[i] = true;
  }
}

// One pass of the greedy algorithm. For each interval k in price order:
//
//   M1 = max{0, a_i : i < k}
//   M2 = max{0, a_i : i >= k}
//   m  = min{b_i : i >= k}
//   x_k = min{max{0, M2 - M1}, min{u_k, m - M1}}   if c_k >= 0
//   x_k = min{u_k, m - M1}                         otherwise
//
// then a_i and b_i drop by x_k for all i >= k. The M2 scan starts from M1
// instead of 0, which yields max{M1, M2} - M1 == max{0, M2 - M1} without a
// separate comparison (M1 >= 0).
template <class Counter>
ChargeSolution run_greedy(const CoreProblem& problem, const PriceOrder& order,
                          ZeroPrice zero_as, Counter& counter) {
  const std::size_t n = problem.size();
  std::vector<double> a(problem.lower().begin(), problem.lower().end());
  std::vector<double> b(problem.upper().begin(), problem.upper().end());
  const auto u = problem.caps();
  const auto c = problem.prices();

  std::vector<double> x(n, 0.0);
  for (std::size_t k : order.sigma) {
    double m1 = 0.0;
    for (std::size_t i = 0; i < k; ++i) m1 = std::max(m1, a[i]);
    counter.comparisons(k);

    double m2 = m1;
    double m = b[k];
    for (std::size_t i = k; i < n; ++i) m2 = std::max(m2, a[i]);
    for (std::size_t i = k + 1; i < n; ++i) m = std::min(m, b[i]);
    counter.comparisons(2 * (n - k) - 1);

    const bool charge_freely =
        zero_as == ZeroPrice::kAsPositive ? c[k] < 0.0 : c[k] <= 0.0;
    counter.comparisons(1);

    const double headroom = m - m1;
    double value;
    if (charge_freely) {
      value = std::min(u[k], headroom);
      counter.flops(1);
      counter.comparisons(1);
    } else {
      value = std::min(m2 - m1, std::min(u[k], headroom));
      counter.flops(2);
      counter.comparisons(2);
    }
    x[k] = value;

    for (std::size_t i = k; i < n; ++i) {
      a[i] -= value;
      b[i] -= value;
    }
    counter.flops(2 * (n - k));
  }

  ChargeSolution solution;
  solution.x = std::move(x);
  solution.objective = objective(problem, solution.x);
  solution.feasibility_residual =
      check_feasible(problem, solution.x, 0.0).residual;
  return solution;
}

}  // namespace

ChargeSolution solve(const CoreProblem& problem, const PriceOrder& order,
                     ZeroPrice zero_as) {
  check_order(problem, order);
  if (!instance_has_feasible_point(problem)) throw_infeasible(problem);
  NoCount counter;
  return run_greedy(problem, order, zero_as, counter);
}

ChargeSolution solve(const CoreProblem& problem, ZeroPrice zero_as) {
  return solve(problem, price_order(problem.prices()), zero_as);
}

CountedSolution solve_counted(const CoreProblem& problem, ZeroPrice zero_as) {
  if (!instance_has_feasible_point(problem)) throw_infeasible(problem);
  const PriceOrder order = price_order(problem.prices());
  Tally tally;
  ChargeSolution solution = run_greedy(problem, order, zero_as, tally);
  return {std::move(solution), tally.counts};
}

}  // namespace storeopt
