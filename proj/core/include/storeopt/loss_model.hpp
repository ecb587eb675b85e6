#pragma once

#include <span>
#include <vector>

namespace storeopt {

// Water-tank conversion constants for liter-denominated product data.
inline constexpr double kWaterSpecificHeat = 4200.0;  // J/(kg K)
inline constexpr double kTankTemperatureSpread = 60.0;  // K
inline constexpr double kTankEnergyDensity = 70.0;  // kWh/m^3

// Capacity in kWh of a tank of the given volume in liters.
double liters_to_kwh(double liters,
                     double energy_density = kTankEnergyDensity) noexcept;

struct LossDataPoint {
  double capacity = 0.0;    // kWh
  double daily_loss = 0.0;  // kWh per 24 h
};

// Standby loss as a power law of capacity: daily_loss = alpha * c^beta.
struct DecayModel {
  double alpha = 0.0;
  double beta = 0.0;

  double daily_loss(double capacity) const;
};

// Ordinary least squares on (ln capacity, ln daily_loss); alpha is exp of the
// intercept, beta the slope. Throws FitError on fewer than two points,
// non-positive values, losses not below capacity, or all-equal capacities.
DecayModel fit_decay_model(std::span<const LossDataPoint> points);

// ((c - alpha c^beta) / c)^(1/24). Throws DomainError when c <= 0 or the
// predicted daily loss is not below c.
double hourly_retention(const DecayModel& model, double capacity);

}  // namespace storeopt
