#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "storeopt/problem.hpp"
#include "storeopt/transforms.hpp"

namespace storeopt::oracle {

// Independent reference methods for validating the greedy solver. Neither
// method is meant for production sizes.

enum class Method { kExactLp, kGridEnumeration };

const char* to_string(Method method) noexcept;

struct OracleResult {
  double objective = 0.0;
  std::vector<double> x;
  Method method = Method::kExactLp;
};

inline constexpr std::size_t kMaxExactSize = 50;
inline constexpr std::size_t kMaxGridSize = 5;

// Dense two-phase simplex with Bland's rule on the explicit LP (slack and
// surplus variables for every bound). Requires n <= kMaxExactSize.
// Throws InfeasibleError, SizeError.
OracleResult solve_exact(const CoreProblem& problem);

// Best feasible point on the per-coordinate grid {0, h, 2h, ..., u_i} (u_i
// itself always included). Requires n <= kMaxGridSize and h > 0.
// Throws InfeasibleError when no grid point is feasible, SizeError.
OracleResult solve_grid(const CoreProblem& problem, double step);

OracleResult oracle_solve(const CoreProblem& problem, Method method,
                          double grid_step = 0.01);

// Random instance generator shared by tests and the benchmark harness:
// d ~ U[0, 2], S ~ U[1, 5], C ~ U[0.5, 3]. Instances without a feasible
// point are discarded and redrawn.
enum class PriceStyle {
  // U[-1, 1] with |c| >= 1e-3, all values pairwise distinct.
  kDistinctNonzero,
  // Drawn from a small set containing 0 so that ties and zeros are common.
  kTiesAndZeros,
};

using Rng = std::mt19937_64;

StorageScenario random_scenario(Rng& rng, std::size_t n, PriceStyle style);

// Lossless scenario that admits a feasible charge vector.
StorageScenario random_feasible_scenario(Rng& rng, std::size_t n,
                                         PriceStyle style);

// build_lossless(random_feasible_scenario(...)).problem
CoreProblem random_feasible_instance(Rng& rng, std::size_t n,
                                     PriceStyle style);

}  // namespace storeopt::oracle
