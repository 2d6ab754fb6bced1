#include "fluctuant/linear_response.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fluctuant/spectral.hpp"

namespace fluctuant {

namespace {

void require_hermitian_observable(const Eigen::MatrixXcd& b, int n) {
  if (b.rows() != n || b.cols() != n)
    throw std::invalid_argument("observable dimension mismatch");
  if ((b - b.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("observable must be Hermitian within 1e-12");
}

}  // namespace

ResponseData response_and_correlation(const QuantumModel& m, const Eigen::MatrixXcd& b,
                                      double beta, const std::vector<double>& time_grid,
                                      double freq_tol) {
  const int n = m.dimension();
  require_hermitian_observable(b, n);
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.h0());
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd e = es.eigenvalues();
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::MatrixXcd q_eig = v.adjoint() * m.q_operator() * v;
  const Eigen::MatrixXcd b_eig = v.adjoint() * b * v;

  const double e0 = e.minCoeff();
  Eigen::VectorXd pop(n);
  for (int a = 0; a < n; ++a) pop[a] = std::exp(-beta * (e[a] - e0));
  pop /= pop.sum();

  const double hbar = m.hbar();
  // raw line weights: Phi(t) = sum c_phi e^(i w t), Psi(t) = sum c_psi e^(i w t)
  struct Line {
    std::complex<double> c_phi{0.0, 0.0};
    std::complex<double> c_psi{0.0, 0.0};
    double omega_sum = 0.0;
    double weight = 0.0;
  };
  std::map<long long, Line> lines;  // keyed by round(omega / freq_tol)
  const std::complex<double> inv_ih(0.0, -1.0 / hbar);  // 1/(i hbar)

  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      const std::complex<double> matel = q_eig(a, c) * b_eig(c, a);
      if (std::abs(matel) < 1e-300) continue;
      const double omega = (e[c] - e[a]) / hbar;
      auto& line = lines[static_cast<long long>(std::llround(omega / freq_tol))];
      line.c_phi += inv_ih * (pop[a] - pop[c]) * matel;
      line.c_psi += 0.5 * (pop[a] + pop[c]) * matel;
      const double wgt = std::abs(matel);
      line.omega_sum += wgt * omega;
      line.weight += wgt;
    }
  }

  ResponseData r;
  r.beta = beta;
  r.hbar = hbar;
  r.time_grid = time_grid;
  for (const auto& [key, line] : lines) {
    BohrTerm term;
    term.omega = line.weight > 0.0 ? line.omega_sum / line.weight
                                   : static_cast<double>(key) * freq_tol;
    if (std::abs(term.omega) > 0.5 * freq_tol) {
      // absorb i/omega so that the coth relation is line-by-line exact and real
      term.phi_amplitude = std::complex<double>(0.0, 1.0) / term.omega * line.c_phi;
    } else {
      term.omega = 0.0;
      term.phi_amplitude = {0.0, 0.0};  // equal populations: no zero-frequency response
    }
    term.psi_amplitude = line.c_psi;
    r.bohr_terms.push_back(term);
  }

  r.phi.assign(time_grid.size(), 0.0);
  r.psi.assign(time_grid.size(), 0.0);
  for (std::size_t i = 0; i < time_grid.size(); ++i) {
    std::complex<double> phi_acc{0.0, 0.0}, psi_acc{0.0, 0.0};
    for (const auto& term : r.bohr_terms) {
      const std::complex<double> osc =
          std::exp(std::complex<double>(0.0, term.omega * time_grid[i]));
      // undo the amplitude convention: raw Phi weight is -i omega phi_amplitude
      phi_acc += std::complex<double>(0.0, -term.omega) * term.phi_amplitude * osc;
      psi_acc += term.psi_amplitude * osc;
    }
    r.phi[i] = phi_acc.real();
    r.psi[i] = psi_acc.real();
  }
  return r;
}

double fdt_check(const ResponseData& r) {
  double scale = 0.0;
  for (const auto& t : r.bohr_terms) scale = std::max(scale, std::abs(t.psi_amplitude));
  if (scale == 0.0) return 0.0;

  double worst = 0.0;
  for (const auto& t : r.bohr_terms) {
    if (t.omega == 0.0) continue;  // static line carries no response partner
    if (std::abs(t.psi_amplitude) < 1e-12 * scale) continue;
    const double x = 0.5 * r.beta * r.hbar * t.omega;
    const std::complex<double> expected =
        0.5 * r.hbar * t.omega / std::tanh(x) * t.phi_amplitude;
    worst = std::max(worst,
                     std::abs(t.psi_amplitude - expected) / std::abs(t.psi_amplitude));
  }
  return worst;
}

std::vector<std::pair<double, double>> fdt_ratios(const ResponseData& r) {
  std::vector<std::pair<double, double>> out;
  for (const auto& t : r.bohr_terms) {
    if (t.omega == 0.0 || std::abs(t.phi_amplitude) < 1e-300) continue;
    out.emplace_back(t.omega, (t.psi_amplitude / t.phi_amplitude).real());
  }
  return out;
}

ResponsePrediction linear_response_prediction(const QuantumModel& m, const Eigen::MatrixXcd& b,
                                              const ForceProtocol& p, double beta,
                                              std::size_t slices) {
  const int n = m.dimension();
  require_hermitian_observable(b, n);
  if (slices < 2) throw std::invalid_argument("need at least two slices");

  const double tau = p.tau();
  const double dt = tau / static_cast<double>(slices);
  std::vector<double> grid(slices + 1);
  for (std::size_t k = 0; k <= slices; ++k)
    grid[k] = (k == slices) ? tau : dt * static_cast<double>(k);

  const ResponseData resp = response_and_correlation(m, b, beta, grid);

  // exact side: evolve the H0 Gibbs state step by step under the driven H
  const Eigen::MatrixXcd rho0 = gibbs_state(m.h0(), beta);
  const double b0 = (b * rho0).trace().real();
  std::vector<double> exact(slices + 1, 0.0);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  const std::complex<double> minus_i(0.0, -1.0);
  for (std::size_t k = 1; k <= slices; ++k) {
    const double lam = p.evaluate((static_cast<double>(k) - 0.5) * dt);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.hamiltonian(lam));
    Eigen::VectorXcd phase(n);
    for (int i = 0; i < n; ++i)
      phase[i] = std::exp(minus_i * es.eigenvalues()[i] * dt / m.hbar());
    u = (es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint()) * u;
    exact[k] = ((b * u * rho0 * u.adjoint()).trace().real()) - b0;
  }

  // predicted side: trapezoid convolution of Phi with the drive on the grid
  std::vector<double> lam_grid(slices + 1);
  for (std::size_t k = 0; k <= slices; ++k) lam_grid[k] = p.evaluate(grid[k]);

  // Phi on the grid once; Phi(t_k - t_j) = phi[k - j] because the grid is uniform
  const std::vector<double>& phi = resp.phi;
  std::vector<double> predicted(slices + 1, 0.0);
  for (std::size_t k = 1; k <= slices; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      const double wgt = (j == 0 || j == k) ? 0.5 : 1.0;
      acc += wgt * phi[k - j] * lam_grid[j];
    }
    predicted[k] = acc * dt;
  }

  ResponsePrediction out;
  out.time_grid = grid;
  out.predicted = std::move(predicted);
  out.exact = std::move(exact);
  for (std::size_t k = 0; k <= slices; ++k)
    out.max_gap = std::max(out.max_gap, std::abs(out.predicted[k] - out.exact[k]));
  return out;
}

}  // namespace fluctuant
