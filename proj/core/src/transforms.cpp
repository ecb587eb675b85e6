#include "storeopt/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace storeopt {

void validate(const StorageScenario& s) {
  const std::size_t n = s.size();
  if (n == 0) throw DimensionError("scenario has no intervals");
  if (s.prices.size() != n) {
    std::ostringstream msg;
    msg << "demand has " << n << " intervals, prices have " << s.prices.size();
    throw DimensionError(msg.str());
  }
  if (s.standby_loss && s.standby_loss->size() != n) {
    std::ostringstream msg;
    msg << "demand has " << n << " intervals, standby losses have "
        << s.standby_loss->size();
    throw DimensionError(msg.str());
  }
  if (!(s.charge_cap > 0.0) || !std::isfinite(s.charge_cap)) {
    throw DomainError("charge cap C must be positive and finite");
  }
  if (!(s.capacity >= 0.0) || !std::isfinite(s.capacity)) {
    throw DomainError("capacity S must be nonnegative and finite");
  }
  if (!(s.retention > 0.0 && s.retention <= 1.0)) {
    std::ostringstream msg;
    msg << "retention q = " << s.retention << " is outside (0, 1]";
    throw DomainError(msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.demand[i] >= 0.0) || !std::isfinite(s.demand[i])) {
      std::ostringstream msg;
      msg << "demand[" << i << "] = " << s.demand[i]
          << " must be nonnegative and finite";
      throw DomainError(msg.str());
    }
    if (!std::isfinite(s.prices[i])) {
      std::ostringstream msg;
      msg << "price[" << i << "] is not finite";
      throw DomainError(msg.str());
    }
    if (s.standby_loss) {
      const double l = (*s.standby_loss)[i];
      if (!(l >= 0.0) || !std::isfinite(l)) {
        std::ostringstream msg;
        msg << "standby loss[" << i << "] = " << l
            << " must be nonnegative and finite";
        throw DomainError(msg.str());
      }
    }
  }
}

const char* to_string(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::kLossless:
      return "lossless";
    case TransformKind::kConstantLoss:
      return "constant_loss";
    case TransformKind::kDecay:
      return "decay";
    case TransformKind::kCombined:
      return "combined";
  }
  return "unknown";
}

namespace {

std::vector<double> effective_demand(const StorageScenario& s) {
  std::vector<double> d = s.demand;
  if (s.standby_loss) {
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += (*s.standby_loss)[i];
  }
  return d;
}

BuiltProblem prefix_instance(const StorageScenario& s,
                             const std::vector<double>& demand,
                             TransformKind kind) {
  const std::size_t n = demand.size();
  std::vector<double> a(n), b(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += demand[i];
    a[i] = total;
    b[i] = s.capacity + total;
  }
  return {CoreProblem(std::move(a), std::move(b),
                      std::vector<double>(n, s.charge_cap), s.prices),
          TransformRecord{kind, std::vector<double>(n, 1.0)}};
}

BuiltProblem decay_instance(const StorageScenario& s,
                            const std::vector<double>& demand,
                            TransformKind kind) {
  const std::size_t n = demand.size();
  const double q = s.retention;
  if (std::pow(q, static_cast<double>(n - 1)) < kMinDecayScale) {
    std::ostringstream msg;
    msg << "q^(n-1) = " << q << "^" << (n - 1)
        << " underflows the supported range; split the horizon into chained "
           "sub-problems";
    throw NumericalRangeError(msg.str());
  }

  std::vector<double> scale(n);
  for (std::size_t j = 0; j < n; ++j) {
    scale[j] = std::pow(q, static_cast<double>(n - 1 - j));
  }

  std::vector<double> a(n), b(n), u(n), c(n);
  double decayed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    decayed = q * decayed + demand[i];
    a[i] = scale[i] * decayed;
    b[i] = scale[i] * (s.capacity + decayed);
    u[i] = scale[i] * s.charge_cap;
    c[i] = s.prices[i] / scale[i];
  }
  return {CoreProblem(std::move(a), std::move(b), std::move(u), std::move(c)),
          TransformRecord{kind, std::move(scale)}};
}

}  // namespace

BuiltProblem build_lossless(const StorageScenario& s) {
  validate(s);
  if (s.retention != 1.0 || s.standby_loss) {
    throw WrongBuilderError(
        "build_lossless requires q == 1 and no standby losses");
  }
  return prefix_instance(s, s.demand, TransformKind::kLossless);
}

BuiltProblem build_constant_loss(const StorageScenario& s) {
  validate(s);
  if (!s.standby_loss) {
    throw WrongBuilderError("build_constant_loss requires standby losses");
  }
  if (s.retention != 1.0) {
    throw WrongBuilderError(
        "build_constant_loss requires q == 1; use build_combined");
  }
  return prefix_instance(s, effective_demand(s), TransformKind::kConstantLoss);
}

BuiltProblem build_decay_loss(const StorageScenario& s) {
  validate(s);
  if (s.standby_loss) {
    throw WrongBuilderError(
        "build_decay_loss does not take standby losses; use build_combined");
  }
  return decay_instance(s, s.demand, TransformKind::kDecay);
}

BuiltProblem build_combined(const StorageScenario& s) {
  validate(s);
  return decay_instance(s, effective_demand(s), TransformKind::kCombined);
}

BuiltProblem build(const StorageScenario& s) {
  const bool decays = s.retention != 1.0;
  if (s.standby_loss) {
    return decays ? build_combined(s) : build_constant_loss(s);
  }
  return decays ? build_decay_loss(s) : build_lossless(s);
}

std::vector<double> recover_charges(std::span<const double> y,
                                    const TransformRecord& record) {
  if (y.size() != record.scale.size()) {
    throw DimensionError("solution and transform record lengths differ");
  }
  std::vector<double> x(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) x[j] = y[j] / record.scale[j];
  return x;
}

double trajectory_tolerance(const StorageScenario& s) {
  const std::vector<double> d = effective_demand(s);
  double decayed = 0.0;
  double peak = 0.0;
  for (double v : d) {
    decayed = s.retention * decayed + v;
    peak = std::max(peak, decayed);
  }
  return 1e-9 * std::max(1.0, s.capacity + peak);
}

Trajectory storage_trajectory(const StorageScenario& s,
                              std::span<const double> x) {
  return storage_trajectory(s, x, trajectory_tolerance(s));
}

Trajectory storage_trajectory(const StorageScenario& s,
                              std::span<const double> x, double tol) {
  validate(s);
  if (x.size() != s.size()) {
    throw DimensionError("charge vector and scenario lengths differ");
  }
  const std::vector<double> d = effective_demand(s);
  Trajectory t;
  t.tolerance = tol;
  t.level.resize(x.size());
  t.violation.assign(x.size(), false);
  double level = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    level = s.retention * level + x[i] - d[i];
    t.level[i] = level;
    if (level < -tol || level > s.capacity + tol) {
      t.violation[i] = true;
      t.feasible = false;
    }
  }
  return t;
}

}  // namespace storeopt
