#include "fluctuant/quantum_model.hpp"

#include <stdexcept>

namespace fluctuant {

namespace {
constexpr double kSymTol = 1e-12;
constexpr int kMaxDimension = 64;
}  // namespace

QuantumModel::QuantumModel(Eigen::MatrixXd h0, Eigen::MatrixXd q_real, int eta_q, double hbar,
                           std::string name)
    : h0_(std::move(h0)), q_(std::move(q_real)), eta_q_(eta_q), hbar_(hbar),
      name_(std::move(name)) {
  const auto n = h0_.rows();
  if (n < 2) throw std::invalid_argument("quantum model needs dimension >= 2");
  if (n > kMaxDimension) throw std::invalid_argument("quantum model dimension capped at 64");
  if (h0_.cols() != n || q_.rows() != n || q_.cols() != n)
    throw std::invalid_argument("H0 and Q must be square matrices of equal dimension");
  if (eta_q_ != 1 && eta_q_ != -1) throw std::invalid_argument("eta_q must be +1 or -1");
  if (!(hbar_ > 0.0)) throw std::invalid_argument("hbar must be positive");
  if ((h0_ - h0_.transpose()).cwiseAbs().maxCoeff() > kSymTol)
    throw std::invalid_argument("H0 must be real symmetric (within 1e-12)");
  const double q_defect = (eta_q_ == 1) ? (q_ - q_.transpose()).cwiseAbs().maxCoeff()
                                        : (q_ + q_.transpose()).cwiseAbs().maxCoeff();
  if (q_defect > kSymTol)
    throw std::invalid_argument(eta_q_ == 1
                                    ? "Q must be real symmetric for eta_q = +1 (within 1e-12)"
                                    : "Q must be real antisymmetric for eta_q = -1 (within 1e-12)");
}

Eigen::MatrixXcd QuantumModel::h0() const { return h0_.cast<std::complex<double>>(); }

Eigen::MatrixXcd QuantumModel::q_operator() const {
  if (eta_q_ == 1) return q_.cast<std::complex<double>>();
  return std::complex<double>(0.0, 1.0) * q_.cast<std::complex<double>>();
}

Eigen::MatrixXcd QuantumModel::hamiltonian(double lambda) const {
  return h0() - lambda * q_operator();
}

bool QuantumModel::drive_commutes() const {
  const Eigen::MatrixXcd q = q_operator();
  const Eigen::MatrixXcd h = h0();
  return (h * q - q * h).cwiseAbs().maxCoeff() <= 1e-12;
}

QuantumModel QuantumModel::two_level_zx() {
  Eigen::MatrixXd sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  return QuantumModel(sz, sx, +1, 1.0, "two_level_zx");
}

QuantumModel QuantumModel::two_level_zy() {
  Eigen::MatrixXd sz(2, 2), k(2, 2);
  sz << 1, 0, 0, -1;
  k << 0, -1, 1, 0;  // Q = i*k = sigma_y
  return QuantumModel(sz, k, -1, 1.0, "two_level_zy");
}

QuantumModel QuantumModel::four_level_degenerate() {
  // H0 has a twofold-degenerate ground level so projector grouping is exercised.
  Eigen::MatrixXd h0(4, 4), q(4, 4);
  h0 << -1, 0, 0, 0,
         0, -1, 0, 0,
         0, 0, 0.5, 0,
         0, 0, 0, 1.5;
  q << 0.0, 0.3, 0.5, 0.0,
       0.3, 0.0, 0.0, 0.4,
       0.5, 0.0, 0.2, 0.3,
       0.0, 0.4, 0.3, -0.2;
  return QuantumModel(h0, q, +1, 1.0, "four_level_degenerate");
}

QuantumModel QuantumModel::commuting_zz() {
  Eigen::MatrixXd sz(2, 2);
  sz << 1, 0, 0, -1;
  return QuantumModel(sz, sz, +1, 1.0, "commuting_zz");
}

const std::vector<QuantumModel>& QuantumModel::catalog() {
  static const std::vector<QuantumModel> models = {
      two_level_zx(), two_level_zy(), four_level_degenerate(), commuting_zz()};
  return models;
}

}  // namespace fluctuant
