#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fluctuant/classical_model.hpp"
#include "fluctuant/protocol.hpp"

namespace fluctuant {

struct TrajectoryRecord {
  PhasePoint z0;
  PhasePoint z_tau;
  // Two bookkeeping routes to the same work: the energy difference
  // H(z_tau, L_tau) - H(z0, L_0) and the drive integral -int dt dL/dt q(t).
  double work_energy = 0.0;
  double work_integral = 0.0;
  std::vector<double> q_path;  // Q(z(t)) on the step grid, filled on request
};

struct WorkEnsemble {
  std::vector<double> works;  // work_energy per trajectory, in trajectory order
  double beta = 0.0;
  std::string protocol_id;
  std::uint64_t master_seed = 0;
  std::size_t n_trajectories = 0;
};

struct JarzynskiEstimate {
  double estimate = 0.0;       // sample mean of exp(-beta W)
  double standard_error = 0.0; // bootstrap SE of that mean
  std::size_t resamples = 0;
};

struct GeneralizedCheck {
  double lhs = 0.0;  // < exp(int u B) exp(-beta W) > over the forward ensemble
  double lhs_se = 0.0;
  double rhs = 0.0;  // exp(-beta dF) < exp(int u~ B) > over the reverse ensemble
  double rhs_se = 0.0;
  double combined_se() const;
  bool pass() const;
};

enum class PathObservable { position, momentum };
int reversal_parity(PathObservable b);  // +1 for position, -1 for momentum

// Exact Gibbs draws for the harmonic model; Metropolis (10^4 burn-in, thinning 50)
// for the quartic position marginal with exact Gaussian momenta. Deterministic
// given the seed.
std::vector<PhasePoint> sample_gibbs(const ClassicalModel& m, double lambda, double beta,
                                     std::size_t n, std::uint64_t seed);

// Velocity-Verlet pass over [0, tau] with dt = tau/steps and the drive frozen at
// each step's midpoint time; fills both work fields. Throws std::runtime_error
// naming the step if the trajectory blows up.
TrajectoryRecord integrate(const ClassicalModel& m, const ForceProtocol& p, PhasePoint z0,
                           std::size_t steps, bool record_q_path = false);

// Same integrator, but streams (step_index, t, z) to `observe` instead of
// recording; used by the path-functional estimators.
void integrate_observed(const ClassicalModel& m, const ForceProtocol& p, PhasePoint z0,
                        std::size_t steps,
                        const std::function<void(std::size_t, double, const PhasePoint&)>& observe);

// Gibbs-initialized ensemble; trajectory i draws its own RNG stream from
// (seed, i), so results do not depend on thread count.
std::vector<TrajectoryRecord> run_ensemble(const ClassicalModel& m, const ForceProtocol& p,
                                           double beta, std::size_t n, std::size_t steps,
                                           std::uint64_t seed, unsigned threads = 1);

WorkEnsemble make_work_ensemble(const std::vector<TrajectoryRecord>& records, double beta,
                                std::string protocol_id, std::uint64_t seed);

// Distance between the forward point z(t) and the time-reversed image of the
// reverse evolution started from theta(z(tau)); t must lie on the step grid.
double check_microreversibility(const ClassicalModel& m, const ForceProtocol& p, PhasePoint z0,
                                double t, std::size_t steps);

// det of the numerical Jacobian of z0 -> z(tau) (central differences); the
// integrator is symplectic, so this sits at 1 up to finite-difference error.
double flow_jacobian_determinant(const ClassicalModel& m, const ForceProtocol& p, PhasePoint z0,
                                 std::size_t steps, double fd_step = 1e-5);

JarzynskiEstimate jarzynski_estimate(const WorkEnsemble& e, std::size_t resamples = 1000);

// <W> >= dF - 3 SE(<W>)
bool jensen_check(const WorkEnsemble& e, double delta_f);

// Identity with the path weight exp(int_0^tau u_t B(z_t) dt): the reverse side
// uses u~_t = eta_B u_(tau-t) and no work factor. u holds steps+1 node values.
GeneralizedCheck generalized_jarzynski_check(const ClassicalModel& m, const ForceProtocol& p,
                                             const std::vector<double>& u, PathObservable b,
                                             double beta, std::size_t n, std::size_t steps,
                                             std::uint64_t seed, unsigned threads = 1);

}  // namespace fluctuant
