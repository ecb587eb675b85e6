// storeopt: cost-optimal charging of buffer storage units.
//
//   storeopt solve         --prices p.csv --demand d.csv -C 3 -S 7 [--q 0.996]
//   storeopt gridsearch    --prices p.csv --demand d.csv [--losses --loss-data t.csv]
//   storeopt fit-loss      --data table.csv [--liters]
//   storeopt bench         --sizes 100,500,1000 --repeats 5
//   storeopt gen-synthetic --n 8760 --seed 1 --output-prefix data/year
//
// Intervals are one hour long, so a charge power in kW equals the energy
// per interval in kWh.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "storeopt/errors.hpp"
#include "storeopt/io.hpp"
#include "storeopt/loss_model.hpp"
#include "storeopt/scenario.hpp"

namespace io = storeopt::io;

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw storeopt::Error("cannot write '" + path + "'");
  out << text;
}

struct SeriesPair {
  std::vector<double> prices;
  std::vector<double> demand;
};

SeriesPair load_pair(const std::string& price_path,
                     const std::string& demand_path) {
  io::TimeSeries prices = io::read_series(price_path);
  io::TimeSeries demand = io::read_series(demand_path);
  if (prices.values.size() != demand.values.size()) {
    std::ostringstream msg;
    msg << "price file has " << prices.values.size()
        << " rows but demand file has " << demand.values.size();
    throw storeopt::ParseError(msg.str(), 0);
  }
  if (!prices.timestamps.empty() && !demand.timestamps.empty() &&
      prices.timestamps.front() != demand.timestamps.front()) {
    throw storeopt::ParseError(
        "price and demand files start at different timestamps", 0);
  }
  return {std::move(prices.values), std::move(demand.values)};
}

struct SolveArgs {
  std::string prices, demand, losses, output, format;
  double charge_cap = 0.0, capacity = 0.0, retention = 1.0;
};

int run_solve(const SolveArgs& args) {
  SeriesPair data = load_pair(args.prices, args.demand);
  storeopt::StorageScenario s;
  s.prices = std::move(data.prices);
  s.demand = std::move(data.demand);
  s.charge_cap = args.charge_cap;
  s.capacity = args.capacity;
  s.retention = args.retention;
  if (!args.losses.empty()) {
    io::TimeSeries l = io::read_series(args.losses);
    if (l.values.size() != s.size()) {
      throw storeopt::ParseError(
          "standby loss file length differs from demand file", 0);
    }
    s.standby_loss = std::move(l.values);
  }

  const io::SolveReport report = io::run_solve(s);
  const bool csv_output =
      args.format == "csv" ||
      (args.format.empty() && args.output.ends_with(".csv"));
  if (csv_output) {
    std::ostringstream out;
    io::write_solution_csv(out, report);
    write_text(args.output, out.str());
  } else {
    write_text(args.output, io::solution_json(report));
  }

  std::FILE* summary = args.output.empty() || args.output == "-" ? stderr : stdout;
  std::fprintf(summary, "objective_eur %s\n",
               io::format_number(report.solution.objective).c_str());
  if (report.no_storage_cost) {
    std::fprintf(summary, "no_storage_cost_eur %s\n",
                 io::format_number(*report.no_storage_cost).c_str());
  } else {
    std::fprintf(summary, "no_storage_cost_eur infeasible (C below peak demand)\n");
  }
  const auto& d = report.diagnostics;
  std::fprintf(summary,
               "charges zero=%zu max=%zu intermediate=%zu end_level_kwh %s\n",
               d.zero_charges, d.max_charges, d.intermediate_charges,
               io::format_number(d.end_level).c_str());
  return io::kExitOk;
}

struct GridArgs {
  std::string prices, demand, loss_data, output_prefix = "grid";
  double c_min = 3, c_max = 100, c_step = 1;
  double s_min = 0, s_max = 410, s_step = 10;
  double k_slope = 0.47, l_slope = 0.95;
  bool losses = false, liters = false;
  std::vector<double> levels{0.05, 0.10};
  unsigned threads = 0;
};

int run_gridsearch(const GridArgs& args) {
  const SeriesPair data = load_pair(args.prices, args.demand);
  storeopt::GridSpec spec{storeopt::linear_range(args.c_min, args.c_max, args.c_step),
                          storeopt::linear_range(args.s_min, args.s_max, args.s_step),
                          args.losses};
  std::optional<storeopt::DecayModel> model;
  if (args.losses) {
    if (args.loss_data.empty()) {
      throw CLI::ValidationError("--losses requires --loss-data");
    }
    const auto points = io::read_loss_data(args.loss_data, args.liters);
    model = storeopt::fit_decay_model(points);
  }
  storeopt::CostModel cm;
  cm.k_slope = args.k_slope;
  cm.l_slope = args.l_slope;
  storeopt::GridOptions options;
  options.level_fractions = args.levels;
  options.threads = args.threads;

  const auto result =
      storeopt::grid_search(data.demand, data.prices, spec, cm, model, options);

  std::ostringstream surface;
  io::write_surface_csv(surface, result);
  write_text(args.output_prefix + "_surface.csv", surface.str());
  write_text(args.output_prefix + "_summary.json",
             io::grid_summary_json(result, cm, model));
  std::printf("argmin C_kW %s S_kWh %s total_eur %s\n",
              io::format_number(result.argmin.charge_cap).c_str(),
              io::format_number(result.argmin.capacity).c_str(),
              io::format_number(result.argmin.cost).c_str());
  return io::kExitOk;
}

int run_fit(const std::string& data, bool liters, double density,
            const std::string& output) {
  const auto points = io::read_loss_data(data, liters, density);
  storeopt::DecayModel model;
  try {
    model = storeopt::fit_decay_model(points);
  } catch (const storeopt::FitError& e) {
    std::ostringstream msg;
    msg << e.what() << " (" << points.size() << " rows read from '" << data
        << "')";
    throw storeopt::FitError(msg.str());
  }
  write_text(output, io::fit_report_json(model, points));
  std::FILE* summary = output.empty() || output == "-" ? stderr : stdout;
  std::fprintf(summary, "alpha %s beta %s\n",
               io::format_number(model.alpha).c_str(),
               io::format_number(model.beta).c_str());
  return io::kExitOk;
}

int run_bench(const std::vector<std::size_t>& sizes, std::size_t repeats,
              std::uint64_t seed, const std::string& output) {
  const io::BenchReport report = io::run_bench(sizes, repeats, seed);
  write_text(output, io::bench_report_json(report));
  std::FILE* summary = output.empty() || output == "-" ? stderr : stdout;
  for (const auto& e : report.entries) {
    std::fprintf(summary, "n=%zu median_s=%.6f flops=%llu comparisons=%llu\n",
                 e.n, e.median_seconds,
                 static_cast<unsigned long long>(e.counts.flops),
                 static_cast<unsigned long long>(e.counts.comparisons));
  }
  return io::kExitOk;
}

int run_gen(std::size_t n, std::uint64_t seed, io::DemandShape demand,
            io::PriceShape prices, const std::string& prefix) {
  const io::SyntheticData data = io::generate_synthetic(n, seed, demand, prices);
  std::ostringstream p, d;
  io::write_series_csv(p, "price_eur_per_kwh", data.prices, data.timestamps);
  io::write_series_csv(d, "demand_kwh", data.demand, data.timestamps);
  write_text(prefix + "_prices.csv", p.str());
  write_text(prefix + "_demand.csv", d.str());
  return io::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal charging of buffer energy storage units"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Optimal charge curve for one system");
  solve->add_option("--prices", solve_args.prices, "Hourly price CSV (EUR/kWh)")
      ->required()->check(CLI::ExistingFile);
  solve->add_option("--demand", solve_args.demand, "Hourly demand CSV (kWh)")
      ->required()->check(CLI::ExistingFile);
  solve->add_option("-C,--charge-power", solve_args.charge_cap,
                    "Maximum charge power (kW = kWh per hour)")
      ->required()->check(CLI::PositiveNumber);
  solve->add_option("-S,--capacity", solve_args.capacity, "Storage capacity (kWh)")
      ->required()->check(CLI::NonNegativeNumber);
  solve->add_option("-q,--retention", solve_args.retention,
                    "Hourly retention factor in (0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  solve->add_option("--standby-losses", solve_args.losses,
                    "Hourly constant standby loss CSV (kWh)")
      ->check(CLI::ExistingFile);
  solve->add_option("-o,--output", solve_args.output, "Output file ('-' for stdout)");
  solve->add_option("--format", solve_args.format,
                    "Output format (default: csv for *.csv outputs, else json)")
      ->check(CLI::IsMember({"csv", "json"}));

  GridArgs grid_args;
  auto* grid = app.add_subcommand("gridsearch", "Total cost over a (C, S) grid");
  grid->add_option("--prices", grid_args.prices)->required()->check(CLI::ExistingFile);
  grid->add_option("--demand", grid_args.demand)->required()->check(CLI::ExistingFile);
  grid->add_option("--c-min", grid_args.c_min, "kW")->capture_default_str();
  grid->add_option("--c-max", grid_args.c_max, "kW")->capture_default_str();
  grid->add_option("--c-step", grid_args.c_step, "kW")->capture_default_str();
  grid->add_option("--s-min", grid_args.s_min, "kWh")->capture_default_str();
  grid->add_option("--s-max", grid_args.s_max, "kWh")->capture_default_str();
  grid->add_option("--s-step", grid_args.s_step, "kWh")->capture_default_str();
  grid->add_option("--k-slope", grid_args.k_slope, "Annual converter cost, EUR/kW")
      ->capture_default_str();
  grid->add_option("--l-slope", grid_args.l_slope, "Annual storage cost, EUR/kWh")
      ->capture_default_str();
  grid->add_flag("--losses", grid_args.losses,
                 "Capacity-dependent standby losses from --loss-data");
  grid->add_option("--loss-data", grid_args.loss_data,
                   "Loss table CSV (capacity, daily_loss_kwh)")
      ->check(CLI::ExistingFile);
  grid->add_flag("--liters", grid_args.liters, "Loss table capacities are liters");
  grid->add_option("--levels", grid_args.levels, "Level-set fractions")
      ->delimiter(',')->capture_default_str();
  grid->add_option("--threads", grid_args.threads, "Worker threads (0 = all cores)");
  grid->add_option("--output-prefix", grid_args.output_prefix,
                   "Writes <prefix>_surface.csv and <prefix>_summary.json")
      ->capture_default_str();

  std::string fit_data, fit_output;
  bool fit_liters = false;
  double fit_density = storeopt::kTankEnergyDensity;
  auto* fit = app.add_subcommand("fit-loss", "Fit the power-law standby loss model");
  fit->add_option("--data", fit_data, "Loss table CSV")->required()->check(CLI::ExistingFile);
  fit->add_flag("--liters", fit_liters, "Capacities are liters; convert to kWh");
  fit->add_option("--energy-density", fit_density, "kWh per m^3 for --liters")
      ->capture_default_str();
  fit->add_option("-o,--output", fit_output, "Output JSON ('-' for stdout)");

  std::vector<std::size_t> bench_sizes{100, 500, 1000, 2500, 5000};
  std::size_t bench_repeats = 5;
  std::uint64_t bench_seed = 1;
  std::string bench_output;
  auto* bench = app.add_subcommand("bench", "Solver scaling experiment");
  bench->add_option("--sizes", bench_sizes)->delimiter(',')->capture_default_str();
  bench->add_option("--repeats", bench_repeats)->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_option("-o,--output", bench_output, "Report JSON ('-' for stdout)");

  std::size_t gen_n = 8760;
  std::uint64_t gen_seed = 1;
  io::DemandShape gen_demand = io::DemandShape::kSeasonal;
  io::PriceShape gen_price = io::PriceShape::kDiurnalWithNegatives;
  std::string gen_prefix = "synthetic";
  const std::map<std::string, io::DemandShape> demand_shapes{
      {"flat", io::DemandShape::kFlat}, {"seasonal", io::DemandShape::kSeasonal}};
  const std::map<std::string, io::PriceShape> price_shapes{
      {"flat", io::PriceShape::kFlat},
      {"diurnal-with-negatives", io::PriceShape::kDiurnalWithNegatives}};
  auto* gen = app.add_subcommand("gen-synthetic", "Write reproducible test series");
  gen->add_option("--n", gen_n)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--demand-shape", gen_demand)
      ->transform(CLI::CheckedTransformer(demand_shapes, CLI::ignore_case));
  gen->add_option("--price-shape", gen_price)
      ->transform(CLI::CheckedTransformer(price_shapes, CLI::ignore_case));
  gen->add_option("--output-prefix", gen_prefix)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? io::kExitOk : io::kExitParse;
  }

  try {
    if (*solve) return run_solve(solve_args);
    if (*grid) return run_gridsearch(grid_args);
    if (*fit) return run_fit(fit_data, fit_liters, fit_density, fit_output);
    if (*bench) return run_bench(bench_sizes, bench_repeats, bench_seed, bench_output);
    if (*gen) return run_gen(gen_n, gen_seed, gen_demand, gen_price, gen_prefix);
  } catch (const storeopt::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return io::kExitParse;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io::kExitParse;
  } catch (const storeopt::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << " (interval " << e.index()
              << ")\n";
    return io::kExitInfeasible;
  } catch (const storeopt::NumericalRangeError& e) {
    std::cerr << "numerical range: " << e.what() << '\n';
    return io::kExitNumericalRange;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io::kExitOther;
  }
  return io::kExitOther;
}
