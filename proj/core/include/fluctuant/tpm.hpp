#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fluctuant/protocol.hpp"
#include "fluctuant/quantum_model.hpp"
#include "fluctuant/spectral.hpp"

namespace fluctuant {

// Joint statistics of projective energy measurements before and after the drive:
//   p_(m,n) = exp(-beta E_n^0)/Z0 * tr( U^dag P_m^tau U P_n^0 ).
struct TPMEntry {
  int n = 0;  // initial level index
  int m = 0;  // final level index
  double e_initial = 0.0;
  double e_final = 0.0;
  double w = 0.0;  // e_final - e_initial
  double p = 0.0;
};

struct TPMDistribution {
  std::vector<TPMEntry> entries;  // ordered by (n, m)
  double beta = 0.0;
  std::string direction = "forward";
  double z_initial = 0.0;
  double z_final = 0.0;
};

// Probabilities from explicit endpoint Hamiltonians and a unitary; negative
// round-off (within -1e-12) is clamped to zero, anything lower throws, and the
// distribution must sum to 1 within 1e-10 (validated, never rescaled).
TPMDistribution tpm_from_unitary(const Eigen::MatrixXcd& h_initial,
                                 const Eigen::MatrixXcd& h_final, const Eigen::MatrixXcd& u,
                                 double beta, double degeneracy_tol = 1e-9,
                                 std::string direction = "forward");

TPMDistribution tpm_distribution(const QuantumModel& m, const ForceProtocol& p, double beta,
                                 std::size_t slices, double degeneracy_tol = 1e-9,
                                 std::string direction = "forward");

// sum_(m,n) exp(-beta w) p_(m,n); equals Z(L_tau)/Z(L_0) identically.
double quantum_jarzynski(const TPMDistribution& d);

// Work support after merging values closer than merge_tol (probability-weighted
// representative per cluster).
struct WorkAtom {
  double w = 0.0;
  double p = 0.0;
};
std::vector<WorkAtom> aggregate_work(const TPMDistribution& d, double merge_tol = 1e-9);

// max_w | P_F[w] - exp(beta (w - dF)) P_B[-w] | over the merged supports.
// Atoms heavier than align_floor with no partner on the other side indicate
// mismatched inputs and raise a diagnostic error listing them.
double quantum_crooks_check(const TPMDistribution& forward, const TPMDistribution& backward,
                            double delta_f, double merge_tol = 1e-9,
                            double align_floor = 1e-9);

// Operator norm of U_(t,0)[L] - Theta U_(tau-t,0)[L~] Theta U_(tau,0)[L] with
// Theta = entrywise conjugation; t must lie on the slice grid of [0, tau].
// Each propagator is rediscretized over its own span with `slices` slices, so
// interior times expose the genuine O(dt^2) midpoint-placement error while the
// endpoints cancel exactly.
double check_quantum_microreversibility(const QuantumModel& m, const ForceProtocol& p, double t,
                                        std::size_t slices);

// tr(rho_0 exp(-beta W_op)) with W_op = U^dag H(L_tau) U - H(L_0), against the
// partition-function ratio. The two agree only when the endpoint Hamiltonians
// commute with the drive; the gap witnesses the inequivalence elsewhere.
struct OperatorWorkResult {
  double operator_side = 0.0;  // tr(rho_0 exp(-beta W_op))
  double ratio_side = 0.0;     // Z(L_tau)/Z(L_0)
  double gap = 0.0;
};
OperatorWorkResult operator_work_counterexample(const QuantumModel& m, const ForceProtocol& p,
                                                double beta, std::size_t slices);

}  // namespace fluctuant
