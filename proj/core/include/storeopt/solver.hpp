#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "storeopt/problem.hpp"

namespace storeopt {

// How a zero price is classified by the sign test of the greedy step. Both
// conventions reach the same optimal objective; they may pick different
// minimizers when zero prices are present.
enum class ZeroPrice {
  kAsPositive,  // charge only what is required (c >= 0 branch)
  kAsNegative,  // charge as much as possible (c < 0 branch)
};

// Interval indices (0-based) sorted by ascending price; ties keep their
// original relative order.
struct PriceOrder {
  std::vector<std::size_t> sigma;
};

PriceOrder price_order(std::span<const double> prices);

struct OpCounts {
  std::uint64_t flops = 0;        // additions and subtractions
  std::uint64_t comparisons = 0;  // comparisons in the main loop
};

// Worst-case budgets of the greedy solver for an instance of size n.
std::uint64_t flop_bound(std::size_t n) noexcept;
std::uint64_t comparison_bound(std::size_t n) noexcept;

// Minimizer of the problem. Works on private copies of the bounds; the
// problem itself is never modified.
//
// Throws InfeasibleError naming the first cumulative bound that no charge
// vector can meet.
ChargeSolution solve(const CoreProblem& problem,
                     ZeroPrice zero_as = ZeroPrice::kAsPositive);

// Solve with a caller-supplied price order. `order` must sort the prices
// ascending; it is not re-verified beyond being a permutation.
ChargeSolution solve(const CoreProblem& problem, const PriceOrder& order,
                     ZeroPrice zero_as = ZeroPrice::kAsPositive);

struct CountedSolution {
  ChargeSolution solution;
  OpCounts counts;
};

// Same result as solve(), plus the floating-point and comparison counts of
// the main loop. Sorting is not counted.
CountedSolution solve_counted(const CoreProblem& problem,
                              ZeroPrice zero_as = ZeroPrice::kAsPositive);

}  // namespace storeopt
