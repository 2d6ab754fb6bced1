#include "fluctuant/classical_model.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace fluctuant {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Adaptive Simpson on [a, b]; plenty for the smooth, rapidly decaying
// Boltzmann integrands this file feeds it.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

ClassicalModel::ClassicalModel(Kind kind, double mass, double stiffness, double g)
    : kind_(kind), mass_(mass), stiffness_(stiffness), g_(g) {
  if (!(mass_ > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(stiffness_ > 0.0)) throw std::invalid_argument("stiffness must be positive");
  if (kind_ == Kind::quartic && !(g_ > 0.0))
    throw std::invalid_argument("quartic coupling must be positive");
}

ClassicalModel ClassicalModel::harmonic(double mass, double stiffness) {
  return ClassicalModel(Kind::harmonic, mass, stiffness, 0.0);
}

ClassicalModel ClassicalModel::quartic(double mass, double stiffness, double quartic_coupling) {
  return ClassicalModel(Kind::quartic, mass, stiffness, quartic_coupling);
}

std::string ClassicalModel::name() const {
  return kind_ == Kind::harmonic ? "harmonic" : "quartic";
}

double ClassicalModel::potential(double q, double lambda) const {
  double v = 0.5 * stiffness_ * q * q - lambda * q;
  if (kind_ == Kind::quartic) v += 0.25 * g_ * q * q * q * q;
  return v;
}

double ClassicalModel::dV_dq(double q, double lambda) const {
  double d = stiffness_ * q - lambda;
  if (kind_ == Kind::quartic) d += g_ * q * q * q;
  return d;
}

double ClassicalModel::hamiltonian(const PhasePoint& z, double lambda) const {
  return 0.5 * z.p * z.p / mass_ + potential(z.q, lambda);
}

void ClassicalModel::gradient(const PhasePoint& z, double lambda, double& dq, double& dp) const {
  dq = dV_dq(z.q, lambda);
  dp = z.p / mass_;
}

double ClassicalModel::analytic_free_energy(double lambda, double beta) const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (kind_ != Kind::harmonic)
    throw std::invalid_argument(
        "analytic free energy unsupported for the quartic model; use quadrature_free_energy");
  return -std::log((kTwoPi / beta) * std::sqrt(mass_ / stiffness_)) / beta -
         lambda * lambda / (2.0 * stiffness_);
}

double ClassicalModel::quadrature_free_energy(double lambda, double beta, double rel_tol) const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  // The momentum integral is Gaussian; only the configurational part needs quadrature.
  // Shift by the potential minimum so the integrand peaks at 1.
  double qmin = lambda / stiffness_;
  for (int it = 0; it < 200; ++it) {  // Newton for V'(q) = 0
    const double f = dV_dq(qmin, lambda);
    const double fp = stiffness_ + (kind_ == Kind::quartic ? 3.0 * g_ * qmin * qmin : 0.0);
    const double step = f / fp;
    qmin -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(qmin))) break;
  }
  const double vmin = potential(qmin, lambda);
  const auto integrand = [&](double q) { return std::exp(-beta * (potential(q, lambda) - vmin)); };
  // expand the window until the integrand is negligible at both ends
  double half = std::sqrt(2.0 * 40.0 / (beta * stiffness_)) + std::abs(qmin);
  while (integrand(qmin - half) > 1e-18 || integrand(qmin + half) > 1e-18) half *= 1.5;
  const double config = integrate(integrand, qmin - half, qmin + half, rel_tol);
  const double log_z = std::log(config) - beta * vmin + 0.5 * std::log(kTwoPi * mass_ / beta);
  return -log_z / beta;
}

double ClassicalModel::free_energy_difference(double lambda_initial, double lambda_final,
                                              double beta) const {
  if (kind_ == Kind::harmonic)
    return analytic_free_energy(lambda_final, beta) - analytic_free_energy(lambda_initial, beta);
  return quadrature_free_energy(lambda_final, beta) - quadrature_free_energy(lambda_initial, beta);
}

}  // namespace fluctuant
