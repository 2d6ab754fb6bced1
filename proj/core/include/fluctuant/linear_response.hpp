#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "fluctuant/protocol.hpp"
#include "fluctuant/quantum_model.hpp"

namespace fluctuant {

// One spectral line of the equilibrium pair (Phi, Psi) at Bohr frequency omega:
//   Phi(t) = <[Q, B(t)]>_beta / (i hbar) = sum_omega (-i omega phi) e^(i omega t)
//   Psi(t) = <{Q, B(t)}>_beta / 2       = sum_omega psi e^(i omega t)
// The response amplitude carries the extra i/omega so that the line-by-line
// dissipation-fluctuation link reads
//   psi = (hbar omega / 2) coth(beta hbar omega / 2) phi      (omega != 0).
struct BohrTerm {
  double omega = 0.0;
  std::complex<double> phi_amplitude;  // (i/omega) * raw Phi line weight; 0 at omega = 0
  std::complex<double> psi_amplitude;
};

struct ResponseData {
  std::vector<double> time_grid;
  std::vector<double> phi;  // response function on the grid
  std::vector<double> psi;  // symmetrized correlation on the grid
  std::vector<BohrTerm> bohr_terms;
  double beta = 0.0;
  double hbar = 1.0;
};

// Equilibrium response/correlation of B to the drive through Q, both evolved
// under the undriven H0. Accumulated in the H0 eigenbasis; frequencies closer
// than freq_tol share a term.
ResponseData response_and_correlation(const QuantumModel& m, const Eigen::MatrixXcd& b,
                                      double beta, const std::vector<double>& time_grid,
                                      double freq_tol = 1e-9);

// Max relative deviation of psi = (hbar omega/2) coth(beta hbar omega/2) phi over
// nonzero-frequency terms with non-negligible weight.
double fdt_check(const ResponseData& r);

// Per-term ratio psi/phi (real part), for the high-temperature comparison
// against 1/beta. Returns (omega, ratio) pairs for omega != 0.
std::vector<std::pair<double, double>> fdt_ratios(const ResponseData& r);

struct ResponsePrediction {
  std::vector<double> time_grid;
  std::vector<double> predicted;  // convolution of Phi with the drive
  std::vector<double> exact;      // tr(B rho_t) - tr(B rho_beta), full evolution
  double max_gap = 0.0;
};

// First-order prediction dB(t) = int_0^t Phi(t-s) L_s ds versus the exact
// driven evolution of the H0 Gibbs state under H(L_t); p carries the
// already-scaled (epsilon) drive. The gap shrinks as epsilon^2.
ResponsePrediction linear_response_prediction(const QuantumModel& m, const Eigen::MatrixXcd& b,
                                              const ForceProtocol& p, double beta,
                                              std::size_t slices);

}  // namespace fluctuant
