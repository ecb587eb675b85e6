#include "storeopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace storeopt::oracle {

const char* to_string(Method method) noexcept {
  return method == Method::kExactLp ? "exact_lp" : "grid_enumeration";
}

namespace {

constexpr double kPivotEps = 1e-11;

// Dense simplex tableau in canonical form. Row r holds the constraint
// coefficients followed by the right-hand side; basis[r] is the basic
// column of row r.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const {
    return data_[r * (cols_ + 1) + c];
  }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
    }
    basis_[pr] = pc;
  }

  // Minimizes cost over the columns flagged in `allowed` using Bland's rule.
  void minimize(const std::vector<double>& cost,
                const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t entering = cols_;
      for (std::size_t c = 0; c < cols_ && entering == cols_; ++c) {
        if (!allowed[c]) continue;
        double reduced = cost[c];
        for (std::size_t r = 0; r < rows_; ++r) {
          reduced -= cost[basis_[r]] * at(r, c);
        }
        if (reduced < -1e-10) entering = c;
      }
      if (entering == cols_) return;

      // Bland: among minimum-ratio rows, the smallest basic index leaves.
      std::size_t leaving = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double coef = at(r, entering);
        if (coef <= kPivotEps) continue;
        const double ratio = rhs(r) / coef;
        const bool better = leaving == rows_ || ratio < best - 1e-12 ||
                            (ratio <= best + 1e-12 &&
                             basis_[r] < basis_[leaving]);
        if (better) {
          best = leaving == rows_ ? ratio : std::min(best, ratio);
          leaving = r;
        }
      }
      // The feasible set is bounded (0 <= x <= u), so an entering column
      // always has a blocking row.
      if (leaving == rows_) throw Error("simplex: unbounded direction");
      pivot(leaving, entering);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

OracleResult solve_exact(const CoreProblem& problem) {
  const std::size_t n = problem.size();
  if (n > kMaxExactSize) {
    std::ostringstream msg;
    msg << "exact oracle supports n <= " << kMaxExactSize << ", got " << n;
    throw SizeError(msg.str());
  }
  const auto a = problem.lower();
  const auto b = problem.upper();
  const auto u = problem.caps();
  const auto c = problem.prices();

  // Columns: x (n), cap slacks (n), upper slacks (n), lower surpluses (n),
  // artificials (3n). Rows: cap, cumulative upper, cumulative lower.
  const std::size_t m = 3 * n;
  const std::size_t structural = 4 * n;
  const std::size_t cols = structural + m;
  Tableau t(m, cols);

  for (std::size_t i = 0; i < n; ++i) {
    t.at(i, i) = 1.0;
    t.at(i, n + i) = 1.0;
    t.rhs(i) = u[i];

    const std::size_t up = n + i;
    for (std::size_t j = 0; j <= i; ++j) t.at(up, j) = 1.0;
    t.at(up, 2 * n + i) = 1.0;
    t.rhs(up) = b[i];

    const std::size_t lo = 2 * n + i;
    for (std::size_t j = 0; j <= i; ++j) t.at(lo, j) = 1.0;
    t.at(lo, 3 * n + i) = -1.0;
    t.rhs(lo) = a[i];
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (t.rhs(r) < 0.0) {
      for (std::size_t col = 0; col < structural; ++col) {
        t.at(r, col) = -t.at(r, col);
      }
      t.rhs(r) = -t.rhs(r);
    }
    t.at(r, structural + r) = 1.0;
    t.basis()[r] = structural + r;
  }

  // Phase I: drive the artificials to zero.
  std::vector<double> cost(cols, 0.0);
  for (std::size_t col = structural; col < cols; ++col) cost[col] = 1.0;
  std::vector<bool> allowed(cols, true);
  t.minimize(cost, allowed);

  double infeasibility = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] >= structural) infeasibility += t.rhs(r);
  }
  if (infeasibility > 1e-9 * problem.bound_scale()) {
    throw InfeasibleError("exact oracle: instance is infeasible",
                          first_unreachable_bound(problem));
  }

  // Pivot zero-level artificials out of the basis where possible; rows where
  // that is impossible are redundant and stay inert.
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < structural) continue;
    for (std::size_t col = 0; col < structural; ++col) {
      if (std::abs(t.at(r, col)) > 1e-9) {
        t.pivot(r, col);
        break;
      }
    }
  }

  // Phase II.
  std::fill(cost.begin(), cost.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
  for (std::size_t col = structural; col < cols; ++col) allowed[col] = false;
  t.minimize(cost, allowed);

  OracleResult result;
  result.method = Method::kExactLp;
  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) result.x[t.basis()[r]] = t.rhs(r);
  }
  result.objective = objective(problem, result.x);
  return result;
}

OracleResult solve_grid(const CoreProblem& problem, double step) {
  const std::size_t n = problem.size();
  if (n > kMaxGridSize) {
    std::ostringstream msg;
    msg << "grid oracle supports n <= " << kMaxGridSize << ", got " << n;
    throw SizeError(msg.str());
  }
  if (!(step > 0.0)) throw DomainError("grid step must be positive");

  const auto a = problem.lower();
  const auto b = problem.upper();
  const auto u = problem.caps();
  const auto c = problem.prices();
  const double tol = problem.default_tolerance();

  std::vector<std::vector<double>> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto count = static_cast<std::size_t>(std::floor(u[i] / step));
    for (std::size_t k = 0; k <= count; ++k) {
      const double v = static_cast<double>(k) * step;
      if (v <= u[i]) grid[i].push_back(v);
    }
    if (grid[i].back() < u[i]) grid[i].push_back(u[i]);
  }

  std::vector<double> current(n, 0.0);
  std::vector<double> best_x;
  double best = std::numeric_limits<double>::infinity();

  // Depth-first over coordinates; a prefix that breaks its own cumulative
  // bound cannot be repaired by later coordinates.
  auto search = [&](auto&& self, std::size_t i, double prefix,
                    double cost) -> void {
    if (i == n) {
      if (cost < best) {
        best = cost;
        best_x = current;
      }
      return;
    }
    for (double v : grid[i]) {
      const double p = prefix + v;
      if (p > b[i] + tol) break;
      if (p < a[i] - tol) continue;
      current[i] = v;
      self(self, i + 1, p, cost + c[i] * v);
    }
  };
  search(search, 0, 0.0, 0.0);

  if (best_x.empty()) {
    throw InfeasibleError("grid oracle: no feasible grid point",
                          first_unreachable_bound(problem));
  }
  OracleResult result;
  result.method = Method::kGridEnumeration;
  result.x = std::move(best_x);
  result.objective = objective(problem, result.x);
  return result;
}

OracleResult oracle_solve(const CoreProblem& problem, Method method,
                          double grid_step) {
  return method == Method::kExactLp ? solve_exact(problem)
                                    : solve_grid(problem, grid_step);
}

namespace {

std::vector<double> draw_prices(Rng& rng, std::size_t n, PriceStyle style) {
  std::vector<double> prices(n);
  if (style == PriceStyle::kTiesAndZeros) {
    static constexpr double kLevels[] = {-0.5, -0.1, 0.0, 0.0, 0.1, 0.25, 0.4};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kLevels) - 1);
    for (double& p : prices) p = kLevels[pick(rng)];
    return prices;
  }
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (;;) {
    for (double& p : prices) {
      do {
        p = dist(rng);
      } while (std::abs(p) < 1e-3);
    }
    std::vector<double> sorted = prices;
    std::sort(sorted.begin(), sorted.end());
    bool distinct = true;
    for (std::size_t i = 1; i < n && distinct; ++i) {
      distinct = sorted[i] - sorted[i - 1] > 1e-9;
    }
    if (distinct) return prices;
  }
}

}  // namespace

StorageScenario random_scenario(Rng& rng, std::size_t n, PriceStyle style) {
  if (n == 0) throw DimensionError("instance size must be positive");
  std::uniform_real_distribution<double> demand(0.0, 2.0);
  std::uniform_real_distribution<double> capacity(1.0, 5.0);
  std::uniform_real_distribution<double> cap(0.5, 3.0);

  StorageScenario s;
  s.demand.resize(n);
  for (double& d : s.demand) d = demand(rng);
  s.capacity = capacity(rng);
  s.charge_cap = cap(rng);
  s.prices = draw_prices(rng, n, style);
  return s;
}

StorageScenario random_feasible_scenario(Rng& rng, std::size_t n,
                                         PriceStyle style) {
  for (;;) {
    StorageScenario s = random_scenario(rng, n, style);
    if (instance_has_feasible_point(build_lossless(s).problem)) return s;
  }
}

CoreProblem random_feasible_instance(Rng& rng, std::size_t n,
                                     PriceStyle style) {
  return build_lossless(random_feasible_scenario(rng, n, style)).problem;
}

}  // namespace storeopt::oracle
