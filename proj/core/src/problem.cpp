#include "storeopt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace storeopt {

namespace {

void require_finite(std::span<const double> values, const char* name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << name << "[" << i << "] is not finite";
      throw DomainError(msg.str());
    }
  }
}

void require_length(const CoreProblem& problem, std::span<const double> x) {
  if (x.size() != problem.size()) {
    std::ostringstream msg;
    msg << "charge vector has length " << x.size() << ", problem has "
        << problem.size() << " intervals";
    throw DimensionError(msg.str());
  }
}

}  // namespace

CoreProblem::CoreProblem(std::vector<double> lower, std::vector<double> upper,
                         std::vector<double> caps, std::vector<double> prices)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      caps_(std::move(caps)),
      prices_(std::move(prices)) {
  const std::size_t n = lower_.size();
  if (n == 0) throw DimensionError("problem must have at least one interval");
  if (upper_.size() != n || caps_.size() != n || prices_.size() != n) {
    std::ostringstream msg;
    msg << "sequence lengths differ: a=" << n << " b=" << upper_.size()
        << " u=" << caps_.size() << " c=" << prices_.size();
    throw DimensionError(msg.str());
  }
  require_finite(lower_, "a");
  require_finite(upper_, "b");
  require_finite(caps_, "u");
  require_finite(prices_, "c");
  for (std::size_t i = 0; i < n; ++i) {
    if (lower_[i] > upper_[i]) {
      std::ostringstream msg;
      msg << "a[" << i << "] = " << lower_[i] << " exceeds b[" << i
          << "] = " << upper_[i];
      throw DomainError(msg.str());
    }
    if (caps_[i] < 0.0) {
      std::ostringstream msg;
      msg << "u[" << i << "] = " << caps_[i] << " is negative";
      throw DomainError(msg.str());
    }
  }
}

double CoreProblem::bound_scale() const noexcept {
  double scale = 1.0;
  for (double b : upper_) scale = std::max(scale, std::abs(b));
  return scale;
}

double CoreProblem::default_tolerance() const noexcept {
  return 1e-9 * bound_scale();
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::kNone:
      return "none";
    case ViolationKind::kNegativeCharge:
      return "negative charge";
    case ViolationKind::kChargeCap:
      return "charge cap";
    case ViolationKind::kCumulativeLower:
      return "cumulative lower bound";
    case ViolationKind::kCumulativeUpper:
      return "cumulative upper bound";
  }
  return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double term = a[i] * b[i];
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      carry += (sum - t) + term;
    } else {
      carry += (term - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

double objective(const CoreProblem& problem, std::span<const double> x) {
  require_length(problem, x);
  return dot(problem.prices(), x);
}

FeasibilityReport check_feasible(const CoreProblem& problem,
                                 std::span<const double> x, double tol) {
  require_length(problem, x);
  if (!(tol >= 0.0)) throw DomainError("tolerance must be nonnegative");

  const auto a = problem.lower();
  const auto b = problem.upper();
  const auto u = problem.caps();

  FeasibilityReport report;
  auto record = [&](double violation, std::size_t i, ViolationKind kind) {
    if (violation > report.residual) {
      report.residual = violation;
      report.index = i;
      report.kind = kind;
    }
  };

  double prefix = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    record(-x[i], i, ViolationKind::kNegativeCharge);
    record(x[i] - u[i], i, ViolationKind::kChargeCap);
    prefix += x[i];
    record(a[i] - prefix, i, ViolationKind::kCumulativeLower);
    record(prefix - b[i], i, ViolationKind::kCumulativeUpper);
  }
  report.feasible = report.residual <= tol;
  return report;
}

namespace {

struct FillResult {
  std::vector<double> x;
  std::size_t first_violation;
};

FillResult fill_early(const CoreProblem& problem) {
  const std::size_t n = problem.size();
  const auto a = problem.lower();
  const auto b = problem.upper();
  const auto u = problem.caps();
  // Each comparison is relative to the magnitudes involved, so instances
  // whose bounds span many orders of magnitude (decay substitution) are
  // judged as accurately at their small end as at their large end.
  auto tol = [](double p, double q) {
    return kRelativeFeasibilityTolerance * std::max(std::fabs(p), std::fabs(q));
  };

  // Prefix sums are nondecreasing, so prefix_i is bounded by every b_j with
  // j >= i.
  std::vector<double> suffix_min(n);
  std::vector<std::size_t> suffix_arg(n);
  suffix_min[n - 1] = b[n - 1];
  suffix_arg[n - 1] = n - 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    if (b[i] <= suffix_min[i + 1]) {
      suffix_min[i] = b[i];
      suffix_arg[i] = i;
    } else {
      suffix_min[i] = suffix_min[i + 1];
      suffix_arg[i] = suffix_arg[i + 1];
    }
  }

  FillResult result{std::vector<double>(n, 0.0), n};
  double prefix = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double room = suffix_min[i] - prefix;
    if (room < -tol(prefix, suffix_min[i])) {
      if (result.first_violation == n) result.first_violation = suffix_arg[i];
    }
    result.x[i] = std::clamp(room, 0.0, u[i]);
    prefix += result.x[i];
    if (prefix < a[i] - tol(prefix, a[i]) && result.first_violation == n) {
      result.first_violation = i;
    }
  }
  return result;
}

}  // namespace

std::vector<double> earliest_fill(const CoreProblem& problem) {
  return fill_early(problem).x;
}

std::size_t first_unreachable_bound(const CoreProblem& problem) {
  return fill_early(problem).first_violation;
}

bool instance_has_feasible_point(const CoreProblem& problem) {
  return first_unreachable_bound(problem) == problem.size();
}

}  // namespace storeopt
