#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "storeopt/loss_model.hpp"
#include "storeopt/transforms.hpp"

namespace storeopt {

// Linear annualized investment costs. Offsets do not move the optimum and
// are only reported.
struct CostModel {
  double k_slope = 0.47;  // EUR per kW of charge power
  double l_slope = 0.95;  // EUR per kWh of capacity
  double converter_offset = 130.0;  // EUR, reported only
};

struct CostBreakdown {
  bool feasible = false;
  double converter = 0.0;    // k_slope * C
  double storage = 0.0;      // l_slope * S
  double acquisition = 0.0;  // optimal energy cost over the horizon
  double total = 0.0;
};

// k_slope * C + l_slope * S + optimal acquisition cost. An infeasible
// scenario yields feasible == false instead of an exception.
CostBreakdown total_cost(const StorageScenario& s, const CostModel& cm);

// Acquisition cost with no storage: energy bought exactly when demanded.
// Empty when C is below some interval's demand.
std::optional<double> no_storage_cost(std::span<const double> demand,
                                      std::span<const double> prices,
                                      double charge_cap);

struct GridSpec {
  std::vector<double> c_values;  // ascending, > 0
  std::vector<double> s_values;  // ascending, >= 0
  bool losses = false;
};

// Inclusive arithmetic range; the last value is clamped to `last`.
std::vector<double> linear_range(double first, double last, double step);

// C = 3..100 kW in 1 kW steps, S = 0..410 kWh in 10 kWh steps.
GridSpec default_grid(bool losses = false);

struct GridCell {
  bool feasible = false;
  double total = 0.0;
  double acquisition = 0.0;
  double retention = 1.0;
};

struct CellIndex {
  std::size_t c = 0;
  std::size_t s = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct GridArgmin {
  CellIndex index;
  double charge_cap = 0.0;
  double capacity = 0.0;
  double cost = 0.0;
};

struct GridSearchResult {
  GridSpec spec;
  // Row-major, |c_values| x |s_values|.
  std::vector<GridCell> cells;
  GridArgmin argmin;
  // Fraction p -> cells with cost <= cost* + p |cost*|.
  std::map<double, std::vector<CellIndex>> level_sets;

  const GridCell& at(std::size_t ci, std::size_t si) const {
    return cells[ci * spec.s_values.size() + si];
  }
};

struct GridOptions {
  std::vector<double> level_fractions{0.05, 0.10};
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Hourly retention used for a cell of capacity S; 1 when losses are off or
// S == 0.
double cell_retention(const GridSpec& spec,
                      const std::optional<DecayModel>& model, double capacity);

// One total_cost evaluation per (C, S) cell. Cells run in parallel; the
// result does not depend on scheduling. Throws EmptyResultError when no cell
// is feasible, DomainError when losses are requested without a model.
GridSearchResult grid_search(std::span<const double> demand,
                             std::span<const double> prices,
                             const GridSpec& spec, const CostModel& cm,
                             const std::optional<DecayModel>& model,
                             const GridOptions& options = {});

// Cells whose cost is within fraction p of the optimum.
std::vector<CellIndex> level_set(const GridSearchResult& result, double p);

struct SolutionDiagnostics {
  std::size_t zero_charges = 0;
  std::size_t max_charges = 0;
  std::size_t intermediate_charges = 0;
  double total_energy = 0.0;
  double end_level = 0.0;
  bool feasible = true;
  // Equal-width bins over [0, C]; values at C land in the last bin.
  std::vector<std::size_t> histogram;
};

// Charge statistics of x for scenario s. A charge counts as maximal when
// x_i >= C (1 - 1e-9) and as zero when x_i <= 1e-9 C.
SolutionDiagnostics solution_diagnostics(const StorageScenario& s,
                                         std::span<const double> x,
                                         std::size_t bins = 10);

}  // namespace storeopt
