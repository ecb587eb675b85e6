#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "storeopt/problem.hpp"

namespace storeopt {

// Physical description of one storage unit over a horizon of n intervals.
// Units: kWh per interval for energies, EUR/kWh for prices.
struct StorageScenario {
  std::vector<double> demand;  // d_i >= 0
  std::vector<double> prices;  // c_i
  double charge_cap = 0.0;     // C > 0, energy per interval
  double capacity = 0.0;       // S >= 0
  double retention = 1.0;      // q in (0, 1], fraction kept per interval
  std::optional<std::vector<double>> standby_loss;  // l_i >= 0

  std::size_t size() const noexcept { return demand.size(); }
};

// Throws DimensionError / DomainError when the scenario is malformed.
void validate(const StorageScenario& s);

enum class TransformKind { kLossless, kConstantLoss, kDecay, kCombined };

const char* to_string(TransformKind kind) noexcept;

// How a transformed instance relates to physical charges: x_j = y_j / scale_j.
struct TransformRecord {
  TransformKind kind = TransformKind::kLossless;
  std::vector<double> scale;
};

struct BuiltProblem {
  CoreProblem problem;
  TransformRecord record;
};

// Smallest q^(n-1) accepted by the decay builders.
inline constexpr double kMinDecayScale = 1e-280;

// a_i = d_1 + ... + d_i, b_i = S + a_i, u_i = C. Requires q == 1 and no
// standby losses.
BuiltProblem build_lossless(const StorageScenario& s);

// Standby losses are added to the demand of their own interval:
// a_i = sum_{j<=i} (d_j + l_j). Requires q == 1 and losses present.
BuiltProblem build_constant_loss(const StorageScenario& s);

// Multiplicative decay. Uses the substitution y_j = q^(n-j) x_j, which keeps
// every factor in (0, 1]:
//
//   a~_i = q^(n-i) D_i,  b~_i = q^(n-i) (S + D_i),  u~_j = q^(n-j) C,
//   c~_j = c_j / q^(n-j),  with D_i = q D_(i-1) + d_i.
//
// Accepts q == 1 (then identical to build_lossless). Standby losses are not
// allowed here; use build_combined.
BuiltProblem build_decay_loss(const StorageScenario& s);

// Standby losses folded into demand first, then the decay substitution.
BuiltProblem build_combined(const StorageScenario& s);

// Picks the builder matching the scenario's loss configuration.
BuiltProblem build(const StorageScenario& s);

// x_j = y_j / scale_j.
std::vector<double> recover_charges(std::span<const double> y,
                                    const TransformRecord& record);

struct Trajectory {
  std::vector<double> level;
  // violation[i] is set when level[i] leaves [-tol, S + tol].
  std::vector<bool> violation;
  bool feasible = true;
  double tolerance = 0.0;
};

// Default tolerance for trajectory checks: 1e-9 * max(1, S + max_i D_i),
// D_i being the decayed cumulative effective demand.
double trajectory_tolerance(const StorageScenario& s);

// level_i = q level_(i-1) + x_i - d_i - l_i, level_0 = 0.
Trajectory storage_trajectory(const StorageScenario& s,
                              std::span<const double> x);
Trajectory storage_trajectory(const StorageScenario& s,
                              std::span<const double> x, double tol);

}  // namespace storeopt
