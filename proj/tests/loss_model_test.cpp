#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "storeopt/errors.hpp"
#include "storeopt/loss_model.hpp"

namespace storeopt {
namespace {

// Manufacturer standby losses for seven tank sizes.
const std::vector<LossDataPoint> kTankData{
    {3.5, 0.54}, {5.6, 0.66}, {7.0, 0.79}, {8.4, 0.92},
    {14.0, 1.4}, {21.0, 1.6}, {28.0, 1.8}};

// Independent log-log least squares (numpy.polyfit, degree 1).
constexpr double kRefAlpha = 0.24319618065793766;
constexpr double kRefBeta = 0.6187602160933645;

TEST(FitDecayModel, ReproducesPublishedCoefficients) {
  const DecayModel m = fit_decay_model(kTankData);
  EXPECT_NEAR(m.alpha, kRefAlpha, 1e-12 * kRefAlpha);
  EXPECT_NEAR(m.beta, kRefBeta, 1e-12 * kRefBeta);
  EXPECT_NEAR(m.alpha, 0.2431954, 1e-3 * 0.2431954);
  EXPECT_NEAR(m.beta, 0.61876, 1e-3 * 0.61876);
}

TEST(FitDecayModel, FittedRetentionRow) {
  const DecayModel m = fit_decay_model(kTankData);
  const double expected[] = {0.9932, 0.9944, 0.9949, 0.9952, 0.9961, 0.9967, 0.9971};
  for (std::size_t i = 0; i < kTankData.size(); ++i) {
    EXPECT_NEAR(hourly_retention(m, kTankData[i].capacity), expected[i], 5e-4);
  }
}

TEST(FitDecayModel, ExactOnTwoPowerLawPoints) {
  const double alpha = 0.31, beta = 0.55;
  const std::vector<LossDataPoint> pts{{4.0, alpha * std::pow(4.0, beta)},
                                       {50.0, alpha * std::pow(50.0, beta)}};
  const DecayModel m = fit_decay_model(pts);
  EXPECT_NEAR(m.alpha, alpha, 1e-14);
  EXPECT_NEAR(m.beta, beta, 1e-14);
}

TEST(FitDecayModel, NoisyPowerLaw) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> cap(2.0, 500.0);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<LossDataPoint> pts;
  for (int i = 0; i < 20; ++i) {
    const double c = cap(rng);
    pts.push_back({c, 0.25 * std::pow(c, 0.6) * (1.0 + noise(rng))});
  }
  const DecayModel m = fit_decay_model(pts);
  EXPECT_NEAR(m.beta, 0.6, 0.05 * 0.6);
}

TEST(FitDecayModel, RefitOnOwnPredictions) {
  const DecayModel m = fit_decay_model(kTankData);
  std::vector<LossDataPoint> pts;
  for (const auto& p : kTankData) pts.push_back({p.capacity, m.daily_loss(p.capacity)});
  const DecayModel r = fit_decay_model(pts);
  EXPECT_NEAR(r.alpha, m.alpha, 1e-10);
  EXPECT_NEAR(r.beta, m.beta, 1e-10);
}

TEST(FitDecayModel, Errors) {
  EXPECT_THROW(fit_decay_model(std::vector<LossDataPoint>{{3.5, 0.5}}), FitError);
  EXPECT_THROW(fit_decay_model(std::vector<LossDataPoint>{}), FitError);
  EXPECT_THROW(fit_decay_model(std::vector<LossDataPoint>{{3.5, 0.5}, {-1, 0.2}}),
               FitError);
  EXPECT_THROW(fit_decay_model(std::vector<LossDataPoint>{{3.5, 0.5}, {4, 0}}),
               FitError);
  EXPECT_THROW(fit_decay_model(std::vector<LossDataPoint>{{3.5, 0.5}, {3.5, 0.6}}),
               FitError);
  EXPECT_THROW(fit_decay_model(std::vector<LossDataPoint>{{3.5, 0.5}, {1, 2}}),
               FitError);
}

TEST(HourlyRetention, SpotValues) {
  const DecayModel published{0.2431954, 0.61876};
  EXPECT_NEAR(hourly_retention(published, 14.71), 0.9962, 5e-5);
  EXPECT_NEAR(hourly_retention(published, 411.99), 0.9989, 1e-4);
  // Quoted daily losses of 8.73 % and 2.61 % compound the rounded factors;
  // the unrounded large-tank factor 0.998967 loses 2.45 % per day.
  EXPECT_NEAR(1.0 - std::pow(0.9962, 24), 0.0873, 5e-5);
  EXPECT_NEAR(1.0 - std::pow(0.9989, 24), 0.0261, 5e-5);
  EXPECT_NEAR(1.0 - std::pow(hourly_retention(published, 14.71), 24), 0.0873, 5e-4);
  EXPECT_NEAR(1.0 - std::pow(hourly_retention(published, 411.99), 24),
              0.0244938, 1e-6);
}

TEST(HourlyRetention, DailyCompoundingIdentity) {
  const DecayModel m = fit_decay_model(kTankData);
  for (double c = 1.0; c < 2000.0; c *= 1.37) {
    const double q = hourly_retention(m, c);
    const double day = (c - m.daily_loss(c)) / c;
    EXPECT_NEAR(std::pow(q, 24), day, 1e-12 * day);
  }
}

TEST(HourlyRetention, IncreasingInCapacity) {
  const DecayModel m = fit_decay_model(kTankData);
  double previous = 0.0;
  for (double c = 0.5; c < 1000.0; c += 0.5) {
    const double q = hourly_retention(m, c);
    EXPECT_GT(q, previous);
    EXPECT_LT(q, 1.0);
    previous = q;
  }
}

TEST(HourlyRetention, DomainErrors) {
  const DecayModel m{0.2431954, 0.61876};
  EXPECT_THROW(hourly_retention(m, 0.0), DomainError);
  EXPECT_THROW(hourly_retention(m, -3.0), DomainError);
  // alpha c^beta >= c below about 0.0245 kWh.
  EXPECT_THROW(hourly_retention(m, 0.01), DomainError);
}

TEST(LitersToKwh, UsesTankEnergyDensity) {
  EXPECT_DOUBLE_EQ(liters_to_kwh(1000.0), 70.0);
  EXPECT_DOUBLE_EQ(liters_to_kwh(50.0), 3.5);
  // 4200 J/(kg K) * 60 K * 1000 kg/m^3 = 70 kWh/m^3.
  EXPECT_DOUBLE_EQ(kWaterSpecificHeat * kTankTemperatureSpread * 1000.0 / 3.6e6,
                   kTankEnergyDensity);
}

}  // namespace
}  // namespace storeopt
