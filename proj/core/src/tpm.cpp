#include "fluctuant/tpm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fluctuant/propagator.hpp"

namespace fluctuant {

TPMDistribution tpm_from_unitary(const Eigen::MatrixXcd& h_initial,
                                 const Eigen::MatrixXcd& h_final, const Eigen::MatrixXcd& u,
                                 double beta, double degeneracy_tol, std::string direction) {
  const auto d0 = spectral_decompose(h_initial, degeneracy_tol);
  const auto d1 = spectral_decompose(h_final, degeneracy_tol);

  const double e_min = d0.eigenvalues.front();
  double z0_shifted = 0.0;
  for (int n = 0; n < d0.levels(); ++n)
    z0_shifted += d0.ranks[n] * std::exp(-beta * (d0.eigenvalues[n] - e_min));

  TPMDistribution dist;
  dist.beta = beta;
  dist.direction = std::move(direction);
  dist.z_initial = partition_function(d0, beta);
  dist.z_final = partition_function(d1, beta);

  // cache U^dag P_m U once per final level
  std::vector<Eigen::MatrixXcd> back_projected(d1.levels());
  for (int m = 0; m < d1.levels(); ++m)
    back_projected[m] = u.adjoint() * d1.projectors[m] * u;

  double total = 0.0;
  for (int n = 0; n < d0.levels(); ++n) {
    const double occupancy = std::exp(-beta * (d0.eigenvalues[n] - e_min)) / z0_shifted;
    for (int m = 0; m < d1.levels(); ++m) {
      double overlap = (back_projected[m].cwiseProduct(d0.projectors[n].transpose())).sum().real();
      if (overlap < 0.0) {
        if (overlap < -1e-12)
          throw std::runtime_error("negative transition probability beyond round-off");
        overlap = 0.0;
      }
      TPMEntry e;
      e.n = n;
      e.m = m;
      e.e_initial = d0.eigenvalues[n];
      e.e_final = d1.eigenvalues[m];
      e.w = e.e_final - e.e_initial;
      e.p = occupancy * overlap;
      total += e.p;
      dist.entries.push_back(e);
    }
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::runtime_error("two-point distribution sums to " + std::to_string(total) +
                             ", expected 1 within 1e-10");
  return dist;
}

TPMDistribution tpm_distribution(const QuantumModel& m, const ForceProtocol& p, double beta,
                                 std::size_t slices, double degeneracy_tol,
                                 std::string direction) {
  const Eigen::MatrixXcd u = propagator(m, p, slices);
  return tpm_from_unitary(m.hamiltonian(p.initial_value()), m.hamiltonian(p.final_value()), u,
                          beta, degeneracy_tol, std::move(direction));
}

double quantum_jarzynski(const TPMDistribution& d) {
  double acc = 0.0;
  for (const auto& e : d.entries) acc += std::exp(-d.beta * e.w) * e.p;
  return acc;
}

std::vector<WorkAtom> aggregate_work(const TPMDistribution& d, double merge_tol) {
  std::vector<std::pair<double, double>> wp;
  wp.reserve(d.entries.size());
  for (const auto& e : d.entries) wp.emplace_back(e.w, e.p);
  std::sort(wp.begin(), wp.end());

  std::vector<WorkAtom> atoms;
  for (const auto& [w, p] : wp) {
    if (!atoms.empty() && w - atoms.back().w <= merge_tol) {
      auto& a = atoms.back();
      const double mass = a.p + p;
      if (mass > 0.0) a.w = (a.w * a.p + w * p) / mass;  // weighted representative
      a.p = mass;
    } else {
      atoms.push_back({w, p});
    }
  }
  return atoms;
}

double quantum_crooks_check(const TPMDistribution& forward, const TPMDistribution& backward,
                            double delta_f, double merge_tol, double align_floor) {
  if (forward.beta != backward.beta)
    throw std::invalid_argument("forward and backward distributions must share beta");
  const double beta = forward.beta;

  auto fwd = aggregate_work(forward, merge_tol);
  auto bwd = aggregate_work(backward, merge_tol);
  // mirror the reverse support: compare P_F[w] with P_B[-w]
  std::vector<WorkAtom> mirrored(bwd.size());
  for (std::size_t i = 0; i < bwd.size(); ++i)
    mirrored[i] = {-bwd[bwd.size() - 1 - i].w, bwd[bwd.size() - 1 - i].p};

  std::vector<double> unmatched;
  double deviation = 0.0;
  std::size_t i = 0, j = 0;
  while (i < fwd.size() || j < mirrored.size()) {
    const bool take_fwd =
        j >= mirrored.size() ||
        (i < fwd.size() && fwd[i].w < mirrored[j].w - merge_tol);
    const bool take_bwd =
        i >= fwd.size() || (j < mirrored.size() && mirrored[j].w < fwd[i].w - merge_tol);
    if (take_fwd) {
      // no reverse partner at -w
      if (fwd[i].p > align_floor) unmatched.push_back(fwd[i].w);
      deviation = std::max(deviation, fwd[i].p);
      ++i;
    } else if (take_bwd) {
      if (mirrored[j].p > align_floor) unmatched.push_back(mirrored[j].w);
      deviation = std::max(deviation,
                           std::exp(beta * (mirrored[j].w - delta_f)) * mirrored[j].p);
      ++j;
    } else {
      const double w = fwd[i].w;
      deviation = std::max(
          deviation, std::abs(fwd[i].p - std::exp(beta * (w - delta_f)) * mirrored[j].p));
      ++i;
      ++j;
    }
  }
  if (!unmatched.empty()) {
    std::ostringstream msg;
    msg << "work-value alignment failure between forward and reverse supports; unmatched:";
    for (double w : unmatched) msg << ' ' << w;
    throw std::runtime_error(msg.str());
  }
  return deviation;
}

double check_quantum_microreversibility(const QuantumModel& m, const ForceProtocol& p, double t,
                                        std::size_t slices) {
  const double tau = p.tau();
  if (t < 0.0 || t > tau) throw std::domain_error("time outside [0, tau]");
  const double dt = tau / static_cast<double>(slices);
  const auto index = static_cast<std::size_t>(std::llround(t / dt));
  if (std::abs(t - static_cast<double>(index) * dt) > 1e-9 * tau)
    throw std::domain_error("time must lie on the slice grid");

  const Eigen::MatrixXcd lhs = propagator_over(m, p, t, slices);
  const Eigen::MatrixXcd u_full = propagator(m, p, slices);
  const Eigen::MatrixXcd u_rev = propagator_over(m, p.backward(), tau - t, slices);
  const Eigen::MatrixXcd rhs = u_rev.conjugate() * u_full;
  return spectral_norm(lhs - rhs);
}

OperatorWorkResult operator_work_counterexample(const QuantumModel& m, const ForceProtocol& p,
                                                double beta, std::size_t slices) {
  const Eigen::MatrixXcd h0 = m.hamiltonian(p.initial_value());
  const Eigen::MatrixXcd h1 = m.hamiltonian(p.final_value());
  const Eigen::MatrixXcd u = propagator(m, p, slices);
  const Eigen::MatrixXcd w_op = u.adjoint() * h1 * u - h0;
  const Eigen::MatrixXcd exp_w = hermitian_function(
      w_op, [beta](double x) { return std::complex<double>(std::exp(-beta * x), 0.0); });
  OperatorWorkResult r;
  r.operator_side = (gibbs_state(h0, beta) * exp_w).trace().real();
  r.ratio_side = partition_function(h1, beta) / partition_function(h0, beta);
  r.gap = std::abs(r.operator_side - r.ratio_side);
  return r;
}

}  // namespace fluctuant
