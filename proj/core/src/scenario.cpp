#include "storeopt/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <exception>
#include <thread>

#include "storeopt/solver.hpp"

namespace storeopt {

CostBreakdown total_cost(const StorageScenario& s, const CostModel& cm) {
  CostBreakdown out;
  out.converter = cm.k_slope * s.charge_cap;
  out.storage = cm.l_slope * s.capacity;
  const BuiltProblem built = build(s);
  if (!instance_has_feasible_point(built.problem)) return out;
  // The substitution preserves the objective, so the transformed optimum is
  // the physical acquisition cost.
  out.acquisition = solve(built.problem).objective;
  out.total = out.converter + out.storage + out.acquisition;
  out.feasible = true;
  return out;
}

std::optional<double> no_storage_cost(std::span<const double> demand,
                                      std::span<const double> prices,
                                      double charge_cap) {
  StorageScenario s;
  s.demand.assign(demand.begin(), demand.end());
  s.prices.assign(prices.begin(), prices.end());
  s.charge_cap = charge_cap;
  s.capacity = 0.0;
  const BuiltProblem built = build_lossless(s);
  if (!instance_has_feasible_point(built.problem)) return std::nullopt;
  return solve(built.problem).objective;
}

std::vector<double> linear_range(double first, double last, double step) {
  if (!(step > 0.0)) throw DomainError("range step must be positive");
  if (last < first) throw DomainError("range end precedes its start");
  std::vector<double> values;
  const auto count =
      static_cast<std::size_t>(std::floor((last - first) / step + 1e-9));
  values.reserve(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    values.push_back(std::min(last, first + static_cast<double>(k) * step));
  }
  return values;
}

GridSpec default_grid(bool losses) {
  return GridSpec{linear_range(3.0, 100.0, 1.0), linear_range(0.0, 410.0, 10.0),
                  losses};
}

double cell_retention(const GridSpec& spec,
                      const std::optional<DecayModel>& model,
                      double capacity) {
  if (!spec.losses || capacity == 0.0) return 1.0;
  if (!model) throw DomainError("losses requested without a decay model");
  return hourly_retention(*model, capacity);
}

namespace {

void validate_spec(const GridSpec& spec) {
  if (spec.c_values.empty() || spec.s_values.empty()) {
    throw DomainError("grid needs at least one C and one S value");
  }
  for (std::size_t i = 0; i < spec.c_values.size(); ++i) {
    if (!(spec.c_values[i] > 0.0)) throw DomainError("C values must be > 0");
    if (i > 0 && !(spec.c_values[i] > spec.c_values[i - 1])) {
      throw DomainError("C values must be strictly ascending");
    }
  }
  for (std::size_t i = 0; i < spec.s_values.size(); ++i) {
    if (!(spec.s_values[i] >= 0.0)) throw DomainError("S values must be >= 0");
    if (i > 0 && !(spec.s_values[i] > spec.s_values[i - 1])) {
      throw DomainError("S values must be strictly ascending");
    }
  }
}

}  // namespace

std::vector<CellIndex> level_set(const GridSearchResult& result, double p) {
  const double best = result.argmin.cost;
  const double threshold = best + p * std::abs(best);
  std::vector<CellIndex> cells;
  const std::size_t ns = result.spec.s_values.size();
  for (std::size_t ci = 0; ci < result.spec.c_values.size(); ++ci) {
    for (std::size_t si = 0; si < ns; ++si) {
      const GridCell& cell = result.at(ci, si);
      if (cell.feasible && cell.total <= threshold) cells.push_back({ci, si});
    }
  }
  return cells;
}

GridSearchResult grid_search(std::span<const double> demand,
                             std::span<const double> prices,
                             const GridSpec& spec, const CostModel& cm,
                             const std::optional<DecayModel>& model,
                             const GridOptions& options) {
  validate_spec(spec);
  if (spec.losses && !model) {
    throw DomainError("losses requested without a decay model");
  }
  if (demand.size() != prices.size() || demand.empty()) {
    throw DimensionError("demand and price series must be nonempty and equal");
  }

  const std::size_t nc = spec.c_values.size();
  const std::size_t ns = spec.s_values.size();

  // Retention depends only on S; evaluate once per column.
  std::vector<double> retention(ns, 1.0);
  std::vector<bool> retention_ok(ns, true);
  for (std::size_t si = 0; si < ns; ++si) {
    try {
      retention[si] = cell_retention(spec, model, spec.s_values[si]);
    } catch (const DomainError&) {
      retention[si] = std::numeric_limits<double>::quiet_NaN();
      retention_ok[si] = false;
    }
  }

  GridSearchResult result;
  result.spec = spec;
  result.cells.resize(nc * ns);

  StorageScenario base;
  base.demand.assign(demand.begin(), demand.end());
  base.prices.assign(prices.begin(), prices.end());

  auto evaluate = [&](std::size_t cell) {
    const std::size_t ci = cell / ns;
    const std::size_t si = cell % ns;
    GridCell& out = result.cells[cell];
    out.retention = retention[si];
    if (!retention_ok[si]) return;
    StorageScenario s = base;
    s.charge_cap = spec.c_values[ci];
    s.capacity = spec.s_values[si];
    s.retention = retention[si];
    const CostBreakdown cost = total_cost(s, cm);
    out.feasible = cost.feasible;
    out.total = cost.total;
    out.acquisition = cost.acquisition;
  };

  unsigned threads = options.threads != 0
                         ? options.threads
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, result.cells.size()));
  if (threads <= 1) {
    for (std::size_t cell = 0; cell < result.cells.size(); ++cell) {
      evaluate(cell);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        try {
          for (std::size_t cell = next++; cell < result.cells.size() &&
                                          !failed.load();
               cell = next++) {
            evaluate(cell);
          }
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  bool found = false;
  for (std::size_t ci = 0; ci < nc; ++ci) {
    for (std::size_t si = 0; si < ns; ++si) {
      const GridCell& cell = result.at(ci, si);
      if (!cell.feasible) continue;
      // Strict comparison keeps the first minimum in row-major order.
      if (!found || cell.total < result.argmin.cost) {
        result.argmin = {{ci, si}, spec.c_values[ci], spec.s_values[si],
                         cell.total};
        found = true;
      }
    }
  }
  if (!found) throw EmptyResultError("no feasible cell in the (C, S) grid");

  for (double p : options.level_fractions) {
    result.level_sets[p] = level_set(result, p);
  }
  return result;
}

SolutionDiagnostics solution_diagnostics(const StorageScenario& s,
                                         std::span<const double> x,
                                         std::size_t bins) {
  validate(s);
  if (x.size() != s.size()) {
    throw DimensionError("charge vector and scenario lengths differ");
  }
  if (bins == 0) throw DomainError("histogram needs at least one bin");

  const double cap = s.charge_cap;
  SolutionDiagnostics out;
  out.histogram.assign(bins, 0);
  for (double v : x) {
    out.total_energy += v;
    if (v >= cap * (1.0 - 1e-9)) {
      ++out.max_charges;
    } else if (v <= cap * 1e-9) {
      ++out.zero_charges;
    } else {
      ++out.intermediate_charges;
    }
    const double pos = std::clamp(v / cap, 0.0, 1.0) * static_cast<double>(bins);
    const auto bin =
        std::min(bins - 1, static_cast<std::size_t>(std::floor(pos)));
    ++out.histogram[bin];
  }
  const Trajectory t = storage_trajectory(s, x);
  out.end_level = t.level.back();
  out.feasible = t.feasible;
  return out;
}

}  // namespace storeopt
