#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storeopt/loss_model.hpp"
#include "storeopt/scenario.hpp"
#include "storeopt/solver.hpp"
#include "storeopt/transforms.hpp"

// File formats and command pipelines behind the storeopt CLI.
//
// CSV dialect: comma separated, dot decimal, UTF-8, header row required.
// Units are fixed: kWh per (hourly) interval, kW, EUR.
namespace storeopt::io {

inline constexpr int kSchemaVersion = 1;

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitParse = 2,
  kExitInfeasible = 3,
  kExitNumericalRange = 4,
};

// One-column value series, optionally preceded by an hourly ISO-8601
// timestamp column named "timestamp" or "time".
struct TimeSeries {
  std::string column;
  std::vector<std::string> timestamps;
  std::vector<double> values;
};

// Throws ParseError with the 1-based line number of the offending row.
TimeSeries parse_series(std::istream& in);
TimeSeries read_series(const std::filesystem::path& path);

// Seconds since 1970-01-01T00:00:00Z for "YYYY-MM-DDTHH:MM[:SS][Z|+HH:MM]"
// (a space may replace the 'T'). Empty on malformed input.
std::optional<std::int64_t> parse_iso8601(std::string_view text);

// Two columns: capacity (capacity_kwh, or capacity_l when `liters`) and
// daily_loss_kwh. Liter capacities are converted with `energy_density`.
std::vector<LossDataPoint> parse_loss_data(
    std::istream& in, bool liters = false,
    double energy_density = kTankEnergyDensity);
std::vector<LossDataPoint> read_loss_data(
    const std::filesystem::path& path, bool liters = false,
    double energy_density = kTankEnergyDensity);

// Shortest decimal text that round-trips the value.
std::string format_number(double value);

void write_series_csv(std::ostream& out, const std::string& column,
                      std::span<const double> values,
                      std::span<const std::string> timestamps = {});

// Everything the solve command produces for one scenario.
struct SolveReport {
  StorageScenario scenario;
  TransformKind kind = TransformKind::kLossless;
  ChargeSolution solution;  // physical charges and objective
  Trajectory trajectory;
  SolutionDiagnostics diagnostics;
  std::optional<double> no_storage_cost;
};

// Builds the instance matching the scenario's loss configuration, solves it
// and maps the result back to physical charges.
SolveReport run_solve(const StorageScenario& scenario);

// interval,price,demand,[standby_loss,]charge,level
void write_solution_csv(std::ostream& out, const SolveReport& report);
std::string solution_json(const SolveReport& report);

// First column holds C, the header row holds S; infeasible cells are "nan".
void write_surface_csv(std::ostream& out, const GridSearchResult& result);
std::string grid_summary_json(const GridSearchResult& result,
                              const CostModel& cm,
                              const std::optional<DecayModel>& model);

std::string fit_report_json(const DecayModel& model,
                            std::span<const LossDataPoint> points);

struct BenchEntry {
  std::size_t n = 0;
  double median_seconds = 0.0;
  OpCounts counts;
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::size_t repeats = 0;
  std::vector<BenchEntry> entries;
};

// Times solve() on one random feasible instance per size. The instance for a
// size depends only on (seed, n), so counts do not vary with `repeats`.
BenchReport run_bench(std::span<const std::size_t> sizes, std::size_t repeats,
                      std::uint64_t seed);
std::string bench_report_json(const BenchReport& report);

enum class DemandShape { kFlat, kSeasonal };
enum class PriceShape { kFlat, kDiurnalWithNegatives };

struct SyntheticData {
  std::vector<std::string> timestamps;  // hourly from 2012-07-01T00:00:00Z
  std::vector<double> demand;           // kWh per hour
  std::vector<double> prices;           // EUR/kWh
};

// Reproducible hourly series. Seasonal demand peaks in winter; the diurnal
// price shape includes occasional negative hours.
SyntheticData generate_synthetic(std::size_t n, std::uint64_t seed,
                                 DemandShape demand, PriceShape prices);

}  // namespace storeopt::io
