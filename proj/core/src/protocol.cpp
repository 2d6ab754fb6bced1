#include "fluctuant/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fluctuant {

namespace {

void validate_knots(const PiecewiseLinearShape& s, double tau) {
  if (s.knots.size() < 2) throw std::invalid_argument("piecewise_linear needs at least 2 knots");
  if (s.knots.front().first != 0.0)
    throw std::invalid_argument("piecewise_linear knots must start at t = 0");
  if (s.knots.back().first != tau)
    throw std::invalid_argument("piecewise_linear knots must end at t = tau");
  for (std::size_t i = 1; i < s.knots.size(); ++i)
    if (!(s.knots[i].first > s.knots[i - 1].first))
      throw std::invalid_argument("piecewise_linear knot times must be strictly increasing");
}

}  // namespace

ForceProtocol::ForceProtocol(ProtocolShape shape, double tau, int eta_q, std::size_t grid_points)
    : shape_(std::move(shape)), tau_(tau), eta_q_(eta_q), grid_points_(grid_points) {
  if (!(tau_ > 0.0)) throw std::invalid_argument("protocol duration tau must be positive");
  if (eta_q_ != 1 && eta_q_ != -1) throw std::invalid_argument("eta_q must be +1 or -1");
  if (grid_points_ < 2) throw std::invalid_argument("grid_points must be at least 2");
  if (const auto* pw = std::get_if<PiecewiseLinearShape>(&shape_)) validate_knots(*pw, tau_);
}

double ForceProtocol::base_evaluate(double t) const {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantShape>) {
          return s.value;
        } else if constexpr (std::is_same_v<S, LinearRampShape>) {
          return s.from + (s.to - s.from) * (t / tau_);
        } else if constexpr (std::is_same_v<S, SinusoidShape>) {
          return s.amplitude * std::sin(s.omega * t + s.phase);
        } else {
          const auto& kn = s.knots;
          auto it = std::upper_bound(kn.begin(), kn.end(), t,
                                     [](double v, const auto& k) { return v < k.first; });
          if (it == kn.begin()) return kn.front().second;
          if (it == kn.end()) return kn.back().second;
          const auto& [t1, v1] = *it;
          const auto& [t0, v0] = *(it - 1);
          return v0 + (v1 - v0) * ((t - t0) / (t1 - t0));
        }
      },
      shape_);
}

double ForceProtocol::base_derivative(double t) const {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantShape>) {
          (void)t;
          return 0.0;
        } else if constexpr (std::is_same_v<S, LinearRampShape>) {
          return (s.to - s.from) / tau_;
        } else if constexpr (std::is_same_v<S, SinusoidShape>) {
          return s.amplitude * s.omega * std::cos(s.omega * t + s.phase);
        } else {
          const auto& kn = s.knots;
          // slope of the segment to the right of t (last segment at t = tau)
          auto it = std::upper_bound(kn.begin(), kn.end(), t,
                                     [](double v, const auto& k) { return v < k.first; });
          if (it == kn.end()) it = kn.end() - 1;
          if (it == kn.begin()) it = kn.begin() + 1;
          const auto& [t1, v1] = *it;
          const auto& [t0, v0] = *(it - 1);
          return (v1 - v0) / (t1 - t0);
        }
      },
      shape_);
}

double ForceProtocol::evaluate(double t) const {
  // a few ulps of slack so that accumulated grid times t = k*dt stay in range
  const double slack = 8.0 * tau_ * 2.22e-16;
  if (t < -slack || t > tau_ + slack)
    throw std::domain_error("protocol evaluated at t = " + std::to_string(t) +
                            " outside [0, " + std::to_string(tau_) + "]");
  t = std::clamp(t, 0.0, tau_);
  return reversed_ ? sign_ * base_evaluate(tau_ - t) : sign_ * base_evaluate(t);
}

double ForceProtocol::derivative(double t) const {
  const double slack = 8.0 * tau_ * 2.22e-16;
  if (t < -slack || t > tau_ + slack)
    throw std::domain_error("protocol derivative at t = " + std::to_string(t) +
                            " outside [0, " + std::to_string(tau_) + "]");
  t = std::clamp(t, 0.0, tau_);
  return reversed_ ? -sign_ * base_derivative(tau_ - t) : sign_ * base_derivative(t);
}

ForceProtocol ForceProtocol::backward() const {
  ForceProtocol rev = *this;
  rev.reversed_ = !reversed_;
  rev.sign_ = sign_ * static_cast<double>(eta_q_);
  return rev;
}

}  // namespace fluctuant
