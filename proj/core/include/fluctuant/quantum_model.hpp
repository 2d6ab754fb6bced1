#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fluctuant {

// Finite-dimensional driven Hamiltonian H(lambda) = H0 - lambda * Q.
//
// Time reversal is entrywise complex conjugation in the computational basis.
// H0 is real symmetric, so Theta H0 Theta = H0. The drive operator is stored as a
// real matrix q_real with declared parity eta_Q:
//   eta_Q = +1: q_real symmetric,      Q = q_real        (conj(Q) = +Q)
//   eta_Q = -1: q_real antisymmetric,  Q = i * q_real    (conj(Q) = -Q)
// Either way Q is Hermitian and Theta H(lambda) Theta = H(eta_Q * lambda).
class QuantumModel {
 public:
  QuantumModel(Eigen::MatrixXd h0, Eigen::MatrixXd q_real, int eta_q, double hbar = 1.0,
               std::string name = "custom");

  int dimension() const { return static_cast<int>(h0_.rows()); }
  int eta_q() const { return eta_q_; }
  double hbar() const { return hbar_; }
  const std::string& name() const { return name_; }
  const Eigen::MatrixXd& h0_real() const { return h0_; }
  const Eigen::MatrixXd& q_real() const { return q_; }

  Eigen::MatrixXcd h0() const;
  Eigen::MatrixXcd q_operator() const;
  Eigen::MatrixXcd hamiltonian(double lambda) const;

  bool drive_commutes() const;  // [H0, Q] == 0 up to 1e-12

  // Fixed two-level and four-level models used by the test batteries.
  static QuantumModel two_level_zx();          // H0 = sigma_z, Q = sigma_x, eta_Q = +1
  static QuantumModel two_level_zy();          // H0 = sigma_z, Q = sigma_y, eta_Q = -1
  static QuantumModel four_level_degenerate(); // degenerate H0, coupling drive, eta_Q = +1
  static QuantumModel commuting_zz();          // H0 = sigma_z, Q = sigma_z, eta_Q = +1
  static const std::vector<QuantumModel>& catalog();

 private:
  Eigen::MatrixXd h0_;
  Eigen::MatrixXd q_;
  int eta_q_;
  double hbar_;
  std::string name_;
};

}  // namespace fluctuant
