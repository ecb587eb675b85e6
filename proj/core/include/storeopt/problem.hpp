#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "storeopt/errors.hpp"

namespace storeopt {

// Instance of the structured LP
//
//   min  sum_i c_i x_i
//   s.t. 0 <= x_i <= u_i
//        a_i <= x_1 + ... + x_i <= b_i      for every interval i.
//
// Immutable after construction; the constructor enforces n >= 1, equal
// lengths, a_i <= b_i and u_i >= 0.
class CoreProblem {
 public:
  CoreProblem(std::vector<double> lower, std::vector<double> upper,
              std::vector<double> caps, std::vector<double> prices);

  std::size_t size() const noexcept { return lower_.size(); }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }
  std::span<const double> caps() const noexcept { return caps_; }
  std::span<const double> prices() const noexcept { return prices_; }

  // Largest |b_i|, floored at 1; the scale for relative feasibility checks.
  double bound_scale() const noexcept;

  // Default feasibility tolerance: 1e-9 * bound_scale().
  double default_tolerance() const noexcept;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> caps_;
  std::vector<double> prices_;
};

struct ChargeSolution {
  std::vector<double> x;
  double objective = 0.0;
  double feasibility_residual = 0.0;
};

enum class ViolationKind {
  kNone,
  kNegativeCharge,
  kChargeCap,
  kCumulativeLower,
  kCumulativeUpper,
};

struct FeasibilityReport {
  bool feasible = true;
  // Largest violation over all constraints (0 when every constraint holds
  // exactly).
  double residual = 0.0;
  // Interval of the largest violation; meaningful only when residual > 0.
  std::size_t index = 0;
  ViolationKind kind = ViolationKind::kNone;
};

const char* to_string(ViolationKind kind) noexcept;

// Compensated (Neumaier) inner product of equal-length spans; the error is
// bounded by a few ulps of sum |a_i b_i| independent of n.
double dot(std::span<const double> a, std::span<const double> b) noexcept;

// Inner product of prices and x. Throws DimensionError on length mismatch.
double objective(const CoreProblem& problem, std::span<const double> x);

// Checks 0 <= x_i <= u_i and a_i <= prefix_i <= b_i within `tol`.
FeasibilityReport check_feasible(const CoreProblem& problem,
                                 std::span<const double> x, double tol);

// Charges as early and as much as the box and cumulative-upper constraints
// permit. Its prefix sums dominate the prefix sums of every vector that
// satisfies those constraints.
std::vector<double> earliest_fill(const CoreProblem& problem);

// Relative tolerance of the feasibility test below.
inline constexpr double kRelativeFeasibilityTolerance = 1e-9;

// True iff some x satisfies every constraint of the problem. Exact for this
// constraint structure: the earliest fill maximizes every prefix at once.
// Each bound is tested at kRelativeFeasibilityTolerance times its own
// magnitude, not the instance-wide scale.
bool instance_has_feasible_point(const CoreProblem& problem);

// Index of the first cumulative lower bound the earliest fill misses, or
// size() when the instance is feasible.
std::size_t first_unreachable_bound(const CoreProblem& problem);

}  // namespace storeopt
