#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

namespace fluctuant {

// Driving protocols Lambda_t for H(lambda) = H0 - lambda*Q on t in [0, tau].

struct ConstantShape {
  double value = 0.0;
};

struct LinearRampShape {
  double from = 0.0;
  double to = 0.0;
};

struct SinusoidShape {
  double amplitude = 0.0;
  double omega = 0.0;  // angular frequency
  double phase = 0.0;
};

struct PiecewiseLinearShape {
  // (t, value) knots, strictly increasing in t, spanning [0, tau]
  std::vector<std::pair<double, double>> knots;
};

using ProtocolShape =
    std::variant<ConstantShape, LinearRampShape, SinusoidShape, PiecewiseLinearShape>;

class ForceProtocol {
 public:
  // eta_q is the time-reversal parity of the conjugate observable Q (+1 or -1).
  ForceProtocol(ProtocolShape shape, double tau, int eta_q, std::size_t grid_points = 1000);

  double tau() const { return tau_; }
  int eta_q() const { return eta_q_; }
  std::size_t grid_points() const { return grid_points_; }
  const ProtocolShape& shape() const { return shape_; }
  bool reversed() const { return reversed_; }

  // Lambda_t; throws std::domain_error outside [0, tau] (up to a few ulps of slack).
  double evaluate(double t) const;

  // dLambda/dt, analytic per shape; one-sided (right) limit at piecewise knots.
  double derivative(double t) const;

  // Time-reversed companion with evaluate'(t) = eta_q * evaluate(tau - t).
  // Applying it twice restores the original values bitwise for every t.
  ForceProtocol backward() const;

  // Initial and final values, evaluated exactly at the endpoints.
  double initial_value() const { return evaluate(0.0); }
  double final_value() const { return evaluate(tau_); }

 private:
  double base_evaluate(double t) const;
  double base_derivative(double t) const;

  ProtocolShape shape_;
  double tau_;
  int eta_q_;
  std::size_t grid_points_;
  // Reversal is a view: sign * base(tau - t). Keeping it as a flag (rather than
  // rewriting shape parameters) is what makes the double reversal exact.
  bool reversed_ = false;
  double sign_ = 1.0;
};

}  // namespace fluctuant
