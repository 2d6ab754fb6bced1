#pragma once

#include <string>

namespace fluctuant {

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

// Momentum reversal theta(q, p) = (q, -p).
inline PhasePoint time_reverse(const PhasePoint& z) { return {z.q, -z.p}; }

// One-dimensional driven Hamiltonians H(z, lambda) = p^2/2m + V0(q) - lambda*q with
//   harmonic: V0 = k q^2 / 2
//   quartic:  V0 = k q^2 / 2 + g q^4 / 4   (g > 0)
// The conjugate observable is Q = q, which is even under momentum reversal (eta_Q = +1).
class ClassicalModel {
 public:
  enum class Kind { harmonic, quartic };

  static ClassicalModel harmonic(double mass, double stiffness);
  static ClassicalModel quartic(double mass, double stiffness, double quartic_coupling);

  Kind kind() const { return kind_; }
  double mass() const { return mass_; }
  double stiffness() const { return stiffness_; }
  double quartic_coupling() const { return g_; }
  int eta_q() const { return 1; }
  std::string name() const;

  double hamiltonian(const PhasePoint& z, double lambda) const;
  // (dH/dq, dH/dp)
  void gradient(const PhasePoint& z, double lambda, double& dq, double& dp) const;
  double potential(double q, double lambda) const;
  double force(double q, double lambda) const { return -dV_dq(q, lambda); }
  double conjugate_observable(const PhasePoint& z) const { return z.q; }

  // Closed-form Gibbs free energy; available for the harmonic model only,
  // F(lambda) = -ln[(2 pi / beta) sqrt(m/k)]/beta - lambda^2/(2k).
  // Throws std::invalid_argument for the quartic model.
  double analytic_free_energy(double lambda, double beta) const;

  // F(lambda) by adaptive quadrature of the configurational integral; works for
  // both kinds and serves as the reference where no closed form exists.
  double quadrature_free_energy(double lambda, double beta, double rel_tol = 1e-12) const;

  // F(lambda_final) - F(lambda_initial), analytic when possible.
  double free_energy_difference(double lambda_initial, double lambda_final, double beta) const;

 private:
  ClassicalModel(Kind kind, double mass, double stiffness, double g);
  double dV_dq(double q, double lambda) const;

  Kind kind_;
  double mass_;
  double stiffness_;
  double g_;
};

}  // namespace fluctuant
