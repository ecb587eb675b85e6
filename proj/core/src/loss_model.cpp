#include "storeopt/loss_model.hpp"

#include <cmath>
#include <sstream>

#include "storeopt/errors.hpp"

namespace storeopt {

double liters_to_kwh(double liters, double energy_density) noexcept {
  return liters / 1000.0 * energy_density;
}

double DecayModel::daily_loss(double capacity) const {
  return alpha * std::pow(capacity, beta);
}

DecayModel fit_decay_model(std::span<const LossDataPoint> points) {
  if (points.size() < 2) {
    std::ostringstream msg;
    msg << "need at least 2 loss data points, got " << points.size();
    throw FitError(msg.str());
  }
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx, ly;
  lx.reserve(points.size());
  ly.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.capacity > 0.0) || !(p.daily_loss > 0.0) ||
        !std::isfinite(p.capacity) || !std::isfinite(p.daily_loss)) {
      std::ostringstream msg;
      msg << "point " << i << " (capacity " << p.capacity << ", daily loss "
          << p.daily_loss << ") must be positive and finite";
      throw FitError(msg.str());
    }
    if (p.daily_loss >= p.capacity) {
      std::ostringstream msg;
      msg << "point " << i << ": daily loss " << p.daily_loss
          << " is not below capacity " << p.capacity;
      throw FitError(msg.str());
    }
    lx.push_back(std::log(p.capacity));
    ly.push_back(std::log(p.daily_loss));
    sx += lx.back();
    sy += ly.back();
  }
  const double count = static_cast<double>(points.size());
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("all capacities are equal");

  const double slope = sxy / sxx;
  return DecayModel{std::exp(my - slope * mx), slope};
}

double hourly_retention(const DecayModel& model, double capacity) {
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    std::ostringstream msg;
    msg << "capacity " << capacity << " must be positive";
    throw DomainError(msg.str());
  }
  const double loss = model.daily_loss(capacity);
  if (!(loss < capacity) || !(loss >= 0.0)) {
    std::ostringstream msg;
    msg << "predicted daily loss " << loss << " kWh is not in [0, capacity "
        << capacity << ")";
    throw DomainError(msg.str());
  }
  return std::pow((capacity - loss) / capacity, 1.0 / 24.0);
}

}  // namespace storeopt
