#include "storeopt/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "storeopt/oracle.hpp"

namespace storeopt::io {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  for (;;) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) {
    return static_cast<char>(std::tolower(ch));
  });
  return out;
}

double parse_number(std::string_view text, std::size_t line,
                    std::string_view column) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last ||
      !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "line " << line << ": column '" << column
        << "': cannot parse number '" << text << "'";
    throw ParseError(msg.str(), line);
  }
  return value;
}

// Reads rows after the header. Blank lines are skipped; every other row must
// have exactly `width` fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
};

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (number == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split(view);
    if (!have_header) {
      for (auto f : fields) table.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      std::ostringstream msg;
      msg << "line " << number << ": expected " << table.header.size()
          << " fields, found " << fields.size();
      throw ParseError(msg.str(), number);
    }
    table.rows.emplace_back(fields.begin(), fields.end());
    table.lines.push_back(number);
  }
  if (!have_header) throw ParseError("missing header row", 0);
  if (table.rows.empty()) throw ParseError("no data rows", 0);
  return table;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  return in;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string format_iso8601(std::int64_t seconds) {
  const std::int64_t days =
      seconds >= 0 ? seconds / 86400 : (seconds - 86399) / 86400;
  const std::int64_t rem = seconds - days * 86400;
  const std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<long long>(y), m, d, static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

}  // namespace

std::optional<std::int64_t> parse_iso8601(std::string_view text) {
  auto digits = [&](std::size_t pos, std::size_t count) -> std::optional<int> {
    if (pos + count > text.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  // YYYY-MM-DDTHH:MM
  if (text.size() < 16 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
    return std::nullopt;
  }
  const auto y = digits(0, 4), mo = digits(5, 2), d = digits(8, 2),
             h = digits(11, 2), mi = digits(14, 2);
  if (!y || !mo || !d || !h || !mi) return std::nullopt;
  if (*mo < 1 || *mo > 12 || *d < 1 || *d > 31 || *h > 23 || *mi > 59) {
    return std::nullopt;
  }
  std::size_t pos = 16;
  int sec = 0;
  if (pos < text.size() && text[pos] == ':') {
    const auto s = digits(pos + 1, 2);
    if (!s || *s > 59) return std::nullopt;
    sec = *s;
    pos += 3;
  }
  std::int64_t offset = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z' && pos + 1 == text.size()) {
      pos += 1;
    } else if ((text[pos] == '+' || text[pos] == '-') &&
               pos + 6 == text.size() && text[pos + 3] == ':') {
      const auto oh = digits(pos + 1, 2), om = digits(pos + 4, 2);
      if (!oh || !om) return std::nullopt;
      offset = (*oh * 3600 + *om * 60) * (text[pos] == '-' ? -1 : 1);
      pos += 6;
    } else {
      return std::nullopt;
    }
  }
  if (pos != text.size()) return std::nullopt;
  const std::int64_t days = days_from_civil(*y, static_cast<unsigned>(*mo),
                                            static_cast<unsigned>(*d));
  return days * 86400 + *h * 3600 + *mi * 60 + sec - offset;
}

TimeSeries parse_series(std::istream& in) {
  const CsvTable table = read_csv(in);
  TimeSeries series;
  std::size_t value_col = 0;
  bool has_time = false;
  if (table.header.size() == 2) {
    const std::string first = lower(table.header[0]);
    if (first != "timestamp" && first != "time") {
      throw ParseError(
          "line 1: two-column series must start with a 'timestamp' column", 1);
    }
    has_time = true;
    value_col = 1;
  } else if (table.header.size() != 1) {
    throw ParseError("line 1: expected 1 or 2 columns (timestamp, value)", 1);
  }
  series.column = table.header[value_col];

  std::optional<std::int64_t> previous;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = table.lines[r];
    if (has_time) {
      const std::string& stamp = table.rows[r][0];
      const auto t = parse_iso8601(stamp);
      if (!t) {
        std::ostringstream msg;
        msg << "line " << line << ": malformed ISO-8601 timestamp '" << stamp
            << "'";
        throw ParseError(msg.str(), line);
      }
      if (previous && *t - *previous != 3600) {
        std::ostringstream msg;
        msg << "line " << line << ": timestamp '" << stamp
            << "' is not one hour after the previous row";
        throw ParseError(msg.str(), line);
      }
      previous = t;
      series.timestamps.push_back(stamp);
    }
    series.values.push_back(
        parse_number(table.rows[r][value_col], line, series.column));
  }
  return series;
}

TimeSeries read_series(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_series(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::vector<LossDataPoint> parse_loss_data(std::istream& in, bool liters,
                                           double energy_density) {
  const CsvTable table = read_csv(in);
  if (table.header.size() != 2) {
    throw ParseError(
        "line 1: expected columns capacity_kwh (or capacity_l), "
        "daily_loss_kwh",
        1);
  }
  std::vector<LossDataPoint> points;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = table.lines[r];
    double capacity = parse_number(table.rows[r][0], line, table.header[0]);
    if (liters) capacity = liters_to_kwh(capacity, energy_density);
    points.push_back(
        {capacity, parse_number(table.rows[r][1], line, table.header[1])});
  }
  return points;
}

std::vector<LossDataPoint> read_loss_data(const std::filesystem::path& path,
                                          bool liters, double energy_density) {
  auto in = open_input(path);
  try {
    return parse_loss_data(in, liters, energy_density);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                       value);
  return std::string(buf.data(), ptr);
}

void write_series_csv(std::ostream& out, const std::string& column,
                      std::span<const double> values,
                      std::span<const std::string> timestamps) {
  const bool with_time = !timestamps.empty();
  if (with_time && timestamps.size() != values.size()) {
    throw DimensionError("timestamps and values differ in length");
  }
  out << (with_time ? "timestamp," : "") << column << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (with_time) out << timestamps[i] << ',';
    out << format_number(values[i]) << '\n';
  }
}

SolveReport run_solve(const StorageScenario& scenario) {
  const BuiltProblem built = build(scenario);
  SolveReport report;
  report.scenario = scenario;
  report.kind = built.record.kind;

  const ChargeSolution transformed = solve(built.problem);
  report.solution.x = recover_charges(transformed.x, built.record);
  report.solution.objective = dot(scenario.prices, report.solution.x);
  report.trajectory = storage_trajectory(scenario, report.solution.x);

  double residual = 0.0;
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const double x = report.solution.x[i];
    const double level = report.trajectory.level[i];
    residual = std::max({residual, -x, x - scenario.charge_cap, -level,
                         level - scenario.capacity});
  }
  report.solution.feasibility_residual = residual;
  report.diagnostics = solution_diagnostics(scenario, report.solution.x);
  report.no_storage_cost = no_storage_cost(scenario.demand, scenario.prices,
                                           scenario.charge_cap);
  return report;
}

void write_solution_csv(std::ostream& out, const SolveReport& report) {
  const auto& s = report.scenario;
  const bool losses = s.standby_loss.has_value();
  out << "interval,price,demand," << (losses ? "standby_loss," : "")
      << "charge,level\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << i << ',' << format_number(s.prices[i]) << ','
        << format_number(s.demand[i]) << ',';
    if (losses) out << format_number((*s.standby_loss)[i]) << ',';
    out << format_number(report.solution.x[i]) << ','
        << format_number(report.trajectory.level[i]) << '\n';
  }
}

namespace {

json diagnostics_json(const SolutionDiagnostics& d) {
  return json{{"zero_charges", d.zero_charges},
              {"max_charges", d.max_charges},
              {"intermediate_charges", d.intermediate_charges},
              {"total_energy_kwh", d.total_energy},
              {"end_level_kwh", d.end_level},
              {"feasible", d.feasible},
              {"histogram", d.histogram}};
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

std::string solution_json(const SolveReport& report) {
  const auto& s = report.scenario;
  json transform{{"kind", to_string(report.kind)}};
  if (s.standby_loss) {
    transform["constant_loss_reading"] = "cumulative sum of d_j + l_j";
  }
  json doc{
      {"schema_version", kSchemaVersion},
      {"intervals", s.size()},
      {"parameters",
       {{"charge_cap_kwh", s.charge_cap},
        {"capacity_kwh", s.capacity},
        {"retention", s.retention}}},
      {"transform", transform},
      {"objective_eur", report.solution.objective},
      {"no_storage_cost_eur", optional_number(report.no_storage_cost)},
      {"feasibility_residual_kwh", report.solution.feasibility_residual},
      {"diagnostics", diagnostics_json(report.diagnostics)},
      {"charges_kwh", report.solution.x},
      {"levels_kwh", report.trajectory.level},
  };
  return doc.dump(2) + "\n";
}

void write_surface_csv(std::ostream& out, const GridSearchResult& result) {
  out << "C_kW";
  for (double s : result.spec.s_values) out << ",S=" << format_number(s);
  out << '\n';
  for (std::size_t ci = 0; ci < result.spec.c_values.size(); ++ci) {
    out << format_number(result.spec.c_values[ci]);
    for (std::size_t si = 0; si < result.spec.s_values.size(); ++si) {
      const GridCell& cell = result.at(ci, si);
      out << ',' << (cell.feasible ? format_number(cell.total) : "nan");
    }
    out << '\n';
  }
}

std::string grid_summary_json(const GridSearchResult& result,
                              const CostModel& cm,
                              const std::optional<DecayModel>& model) {
  const auto& spec = result.spec;
  const GridCell& best = result.at(result.argmin.index.c, result.argmin.index.s);

  json retention = json::array();
  for (std::size_t si = 0; si < spec.s_values.size(); ++si) {
    retention.push_back({{"capacity_kwh", spec.s_values[si]},
                         {"retention", finite_or_null(result.at(0, si).retention)}});
  }

  json levels = json::object();
  for (const auto& [p, cells] : result.level_sets) {
    json list = json::array();
    for (const CellIndex& c : cells) {
      list.push_back({spec.c_values[c.c], spec.s_values[c.s]});
    }
    const double threshold =
        result.argmin.cost + p * std::abs(result.argmin.cost);
    std::ostringstream key;
    key << std::round(p * 1000.0) / 10.0;
    levels[key.str()] = {{"fraction", p},
                         {"threshold_eur", threshold},
                         {"count", cells.size()},
                         {"cells", list}};
  }

  std::size_t feasible = 0;
  for (const GridCell& c : result.cells) feasible += c.feasible ? 1 : 0;

  json doc{
      {"schema_version", kSchemaVersion},
      {"losses", spec.losses},
      {"grid",
       {{"c_values_kw", spec.c_values},
        {"s_values_kwh", spec.s_values},
        {"cells", result.cells.size()},
        {"feasible_cells", feasible}}},
      {"cost_model",
       {{"k_slope_eur_per_kw", cm.k_slope},
        {"l_slope_eur_per_kwh", cm.l_slope},
        {"converter_offset_eur_excluded", cm.converter_offset}}},
      {"argmin",
       {{"charge_cap_kw", result.argmin.charge_cap},
        {"capacity_kwh", result.argmin.capacity},
        {"total_eur", result.argmin.cost},
        {"acquisition_eur", best.acquisition},
        {"retention", best.retention}}},
      {"level_sets", levels},
      {"retention_by_capacity", retention},
  };
  if (model) {
    doc["decay_model"] = {{"alpha", model->alpha}, {"beta", model->beta}};
  }
  return doc.dump(2) + "\n";
}

std::string fit_report_json(const DecayModel& model,
                            std::span<const LossDataPoint> points) {
  json table = json::array();
  for (const LossDataPoint& p : points) {
    table.push_back(
        {{"capacity_kwh", p.capacity},
         {"daily_loss_kwh", p.daily_loss},
         {"fitted_daily_loss_kwh", model.daily_loss(p.capacity)},
         {"observed_retention",
          std::pow((p.capacity - p.daily_loss) / p.capacity, 1.0 / 24.0)},
         {"fitted_retention", hourly_retention(model, p.capacity)}});
  }
  json doc{{"schema_version", kSchemaVersion},
           {"alpha", model.alpha},
           {"beta", model.beta},
           {"points", points.size()},
           {"retention_table", table}};
  return doc.dump(2) + "\n";
}

BenchReport run_bench(std::span<const std::size_t> sizes, std::size_t repeats,
                      std::uint64_t seed) {
  if (repeats == 0) throw DomainError("repeats must be at least 1");
  BenchReport report;
  report.seed = seed;
  report.repeats = repeats;
  for (std::size_t n : sizes) {
    if (n == 0) throw DomainError("benchmark sizes must be >= 1");
    oracle::Rng rng(seed ^ (0x9E3779B97F4A7C15ull * (n + 1)));
    const CoreProblem problem = oracle::random_feasible_instance(
        rng, n, oracle::PriceStyle::kDistinctNonzero);

    BenchEntry entry;
    entry.n = n;
    entry.counts = solve_counted(problem).counts;
    std::vector<double> times;
    for (std::size_t r = 0; r < repeats; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const ChargeSolution solution = solve(problem);
      const auto stop = std::chrono::steady_clock::now();
      if (solution.x.size() != n) throw Error("benchmark: bad solution size");
      times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    entry.median_seconds = times.size() % 2 == 1
                               ? times[mid]
                               : 0.5 * (times[mid - 1] + times[mid]);
    report.entries.push_back(entry);
  }
  return report;
}

std::string bench_report_json(const BenchReport& report) {
  json sizes = json::array(), times = json::array(), counts = json::array();
  for (const BenchEntry& e : report.entries) {
    sizes.push_back(e.n);
    times.push_back(e.median_seconds);
    counts.push_back({{"flops", e.counts.flops},
                      {"comparisons", e.counts.comparisons},
                      {"flop_bound", flop_bound(e.n)},
                      {"comparison_bound", comparison_bound(e.n)}});
  }
  json doc{{"schema_version", kSchemaVersion},
           {"seed", report.seed},
           {"repeats", report.repeats},
           {"sizes", sizes},
           {"wall_times_s", times},
           {"op_counts", counts}};
  return doc.dump(2) + "\n";
}

SyntheticData generate_synthetic(std::size_t n, std::uint64_t seed,
                                 DemandShape demand_shape,
                                 PriceShape price_shape) {
  if (n == 0) throw DomainError("series length must be >= 1");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  // 2012-07-01T00:00:00Z; mid-January falls about 4776 hours later.
  constexpr std::int64_t kStart = 1341100800;
  constexpr double kWinterPeakHour = 4776.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> dip(0.001, 0.03);

  // Quantized to `scale`ths so the CSV text stays short.
  auto round_to = [](double v, double scale) {
    return std::round(v * scale) / scale;
  };

  SyntheticData data;
  data.timestamps.reserve(n);
  data.demand.reserve(n);
  data.prices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    const double hour = static_cast<double>(i % 24);
    data.timestamps.push_back(
        format_iso8601(kStart + static_cast<std::int64_t>(i) * 3600));

    double d = 1.0;
    if (demand_shape == DemandShape::kSeasonal) {
      const double season = 1.0 + 0.6 * std::cos(kTwoPi * (t - kWinterPeakHour) / 8760.0);
      const double daily = 1.0 + 0.25 * std::sin(kTwoPi * (hour - 6.0) / 24.0);
      d = round_to(0.9 * season * daily * jitter(rng), 1e4);
    }
    data.demand.push_back(d);

    double c = 0.04;
    if (price_shape == PriceShape::kDiurnalWithNegatives) {
      c = 0.045 + 0.015 * std::sin(kTwoPi * (hour - 8.0) / 24.0) + noise(rng);
      if (unit(rng) < 0.003) c = -dip(rng);
      c = round_to(c, 1e5);
    }
    data.prices.push_back(c);
  }
  return data;
}

}  // namespace storeopt::io
