#include "fluctuant/propagator.hpp"

#include <complex>
#include <stdexcept>

namespace fluctuant {

Eigen::MatrixXcd propagator_over(const QuantumModel& m, const ForceProtocol& p, double t_end,
                                 std::size_t slices) {
  const int n = m.dimension();
  if (t_end < 0.0 || t_end > p.tau() * (1.0 + 1e-12))
    throw std::domain_error("propagator end time outside [0, tau]");
  if (t_end == 0.0) return Eigen::MatrixXcd::Identity(n, n);
  if (slices < 1) throw std::invalid_argument("need at least one slice");

  const double dt = t_end / static_cast<double>(slices);
  const std::complex<double> minus_i(0.0, -1.0);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  for (std::size_t k = 0; k < slices; ++k) {
    const double lam = p.evaluate((static_cast<double>(k) + 0.5) * dt);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.hamiltonian(lam));
    if (es.info() != Eigen::Success) throw std::runtime_error("slice eigendecomposition failed");
    Eigen::VectorXcd phase(n);
    for (int i = 0; i < n; ++i)
      phase[i] = std::exp(minus_i * es.eigenvalues()[i] * dt / m.hbar());
    u = (es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint()) * u;
  }
  return u;
}

Eigen::MatrixXcd propagator(const QuantumModel& m, const ForceProtocol& p, std::size_t slices) {
  return propagator_over(m, p, p.tau(), slices);
}

}  // namespace fluctuant
