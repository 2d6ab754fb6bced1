#include "fluctuant/classical_engine.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "fluctuant/rng.hpp"
#include "fluctuant/stats.hpp"

namespace fluctuant {

namespace {

constexpr double kBlowUp = 1e12;

void check_finite(const PhasePoint& z, std::size_t step) {
  if (!std::isfinite(z.q) || !std::isfinite(z.p) || std::abs(z.q) > kBlowUp ||
      std::abs(z.p) > kBlowUp)
    throw std::runtime_error("trajectory blew up at step " + std::to_string(step) +
                             "; reduce dt or check the model");
}

// Chunked parallel-for writing into caller-owned slots; the join plus the
// per-index RNG streams keep results independent of the thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n < 2 * threads) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

double trapezoid_weight(std::size_t k, std::size_t steps) {
  return (k == 0 || k == steps) ? 0.5 : 1.0;
}

}  // namespace

int reversal_parity(PathObservable b) { return b == PathObservable::position ? 1 : -1; }

double GeneralizedCheck::combined_se() const { return std::hypot(lhs_se, rhs_se); }
bool GeneralizedCheck::pass() const { return std::abs(lhs - rhs) <= 3.0 * combined_se(); }

std::vector<PhasePoint> sample_gibbs(const ClassicalModel& m, double lambda, double beta,
                                     std::size_t n, std::uint64_t seed) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (n < 1) throw std::invalid_argument("need at least one sample");

  std::vector<PhasePoint> out(n);
  const double sigma_p = std::sqrt(m.mass() / beta);

  if (m.kind() == ClassicalModel::Kind::harmonic) {
    const double mu_q = lambda / m.stiffness();
    const double sigma_q = 1.0 / std::sqrt(beta * m.stiffness());
    for (std::size_t i = 0; i < n; ++i) {
      auto rng = stream_rng(seed, i);
      std::normal_distribution<double> gauss(0.0, 1.0);
      out[i].q = mu_q + sigma_q * gauss(rng);
      out[i].p = sigma_p * gauss(rng);
    }
    return out;
  }

  // Quartic positions: random-walk Metropolis on exp(-beta V). One chain,
  // 10^4 burn-in sweeps, one draw every 50 accepted-or-rejected sweeps.
  constexpr std::size_t kBurnIn = 10000;
  constexpr std::size_t kThinning = 50;
  // different master for the chain so it never collides with a momentum stream
  auto rng = stream_rng(splitmix64(seed ^ 0x71c4a5ULL), 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // proposal width from the curvature at the potential minimum
  double qstar = lambda / m.stiffness();
  for (int it = 0; it < 100; ++it) {
    const double f = m.stiffness() * qstar + m.quartic_coupling() * qstar * qstar * qstar - lambda;
    const double fp = m.stiffness() + 3.0 * m.quartic_coupling() * qstar * qstar;
    qstar -= f / fp;
  }
  const double curv = m.stiffness() + 3.0 * m.quartic_coupling() * qstar * qstar;
  const double prop = 2.4 / std::sqrt(beta * curv);

  double q = qstar;
  double v = m.potential(q, lambda);
  auto sweep = [&] {
    const double qn = q + prop * gauss(rng);
    const double vn = m.potential(qn, lambda);
    if (vn <= v || unif(rng) < std::exp(-beta * (vn - v))) {
      q = qn;
      v = vn;
    }
  };
  for (std::size_t s = 0; s < kBurnIn; ++s) sweep();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < kThinning; ++s) sweep();
    out[i].q = q;
  }
  // exact Gaussian momenta, one stream per draw as in the harmonic branch
  for (std::size_t i = 0; i < n; ++i) {
    auto prng = stream_rng(seed, i);
    std::normal_distribution<double> g(0.0, 1.0);
    out[i].p = sigma_p * g(prng);
  }
  return out;
}

namespace {

// One kick-drift-kick pass with the drive frozen at lam: symplectic, second
// order, and exactly volume preserving.
inline void leapfrog_step(const ClassicalModel& m, PhasePoint& z, double dt, double lam) {
  const bool quartic = m.kind() == ClassicalModel::Kind::quartic;
  const double k = m.stiffness(), g = m.quartic_coupling(), inv_m = 1.0 / m.mass();
  z.p -= 0.5 * dt * (k * z.q + (quartic ? g * z.q * z.q * z.q : 0.0) - lam);
  z.q += dt * z.p * inv_m;
  z.p -= 0.5 * dt * (k * z.q + (quartic ? g * z.q * z.q * z.q : 0.0) - lam);
}

// Evolve over [0, span] under p with `steps` equal slices of span.
PhasePoint integrate_span(const ClassicalModel& m, const ForceProtocol& p, PhasePoint z,
                          double span, std::size_t steps) {
  const double dt = span / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    leapfrog_step(m, z, dt, p.evaluate((static_cast<double>(k) + 0.5) * dt));
    check_finite(z, k + 1);
  }
  return z;
}

}  // namespace

void integrate_observed(
    const ClassicalModel& m, const ForceProtocol& p, PhasePoint z0, std::size_t steps,
    const std::function<void(std::size_t, double, const PhasePoint&)>& observe) {
  if (steps < 1) throw std::invalid_argument("need at least one integration step");
  const double tau = p.tau();
  const double dt = tau / static_cast<double>(steps);
  PhasePoint z = z0;
  observe(0, 0.0, z);
  for (std::size_t k = 0; k < steps; ++k) {
    leapfrog_step(m, z, dt, p.evaluate((static_cast<double>(k) + 0.5) * dt));
    check_finite(z, k + 1);
    const double t = (k + 1 == steps) ? tau : dt * static_cast<double>(k + 1);
    observe(k + 1, t, z);
  }
}

TrajectoryRecord integrate(const ClassicalModel& m, const ForceProtocol& p, PhasePoint z0,
                           std::size_t steps, bool record_q_path) {
  TrajectoryRecord rec;
  rec.z0 = z0;
  if (record_q_path) rec.q_path.reserve(steps + 1);
  double integral = 0.0;
  integrate_observed(m, p, z0, steps,
                     [&](std::size_t k, double t, const PhasePoint& z) {
                       const double f = -p.derivative(t) * m.conjugate_observable(z);
                       integral += trapezoid_weight(k, steps) * f;
                       if (record_q_path) rec.q_path.push_back(m.conjugate_observable(z));
                       if (k == steps) rec.z_tau = z;
                     });
  const double dt = p.tau() / static_cast<double>(steps);
  rec.work_integral = integral * dt;
  rec.work_energy = m.hamiltonian(rec.z_tau, p.final_value()) -
                    m.hamiltonian(rec.z0, p.initial_value());
  return rec;
}

std::vector<TrajectoryRecord> run_ensemble(const ClassicalModel& m, const ForceProtocol& p,
                                           double beta, std::size_t n, std::size_t steps,
                                           std::uint64_t seed, unsigned threads) {
  const auto z0s = sample_gibbs(m, p.initial_value(), beta, n, seed);
  std::vector<TrajectoryRecord> recs(n);
  parallel_for(n, threads, [&](std::size_t i) { recs[i] = integrate(m, p, z0s[i], steps); });
  return recs;
}

WorkEnsemble make_work_ensemble(const std::vector<TrajectoryRecord>& records, double beta,
                                std::string protocol_id, std::uint64_t seed) {
  WorkEnsemble e;
  e.works.reserve(records.size());
  for (const auto& r : records) e.works.push_back(r.work_energy);
  e.beta = beta;
  e.protocol_id = std::move(protocol_id);
  e.master_seed = seed;
  e.n_trajectories = records.size();
  return e;
}

double check_microreversibility(const ClassicalModel& m, const ForceProtocol& p, PhasePoint z0,
                                double t, std::size_t steps) {
  const double tau = p.tau();
  if (t < 0.0 || t > tau) throw std::domain_error("microreversibility time outside [0, tau]");
  const double dt = tau / static_cast<double>(steps);
  const auto index = static_cast<std::size_t>(std::llround(t / dt));
  if (std::abs(t - static_cast<double>(index) * dt) > 1e-9 * tau)
    throw std::domain_error("microreversibility time must lie on the step grid");

  PhasePoint at_t, at_tau;
  integrate_observed(m, p, z0, steps, [&](std::size_t k, double, const PhasePoint& z) {
    if (k == index) at_t = z;
    if (k == steps) at_tau = z;
  });
  if (index == steps) return 0.0;  // theta(theta(z_tau)) compared with itself

  // reverse leg: evolve theta(z_tau) under the reversed drive for tau - t,
  // rediscretized over its own duration
  const double span = tau - static_cast<double>(index) * dt;
  const PhasePoint zb = integrate_span(m, p.backward(), time_reverse(at_tau), span, steps);
  const PhasePoint back = time_reverse(zb);
  return std::hypot(back.q - at_t.q, back.p - at_t.p);
}

double flow_jacobian_determinant(const ClassicalModel& m, const ForceProtocol& p, PhasePoint z0,
                                 std::size_t steps, double fd_step) {
  auto flow = [&](PhasePoint z) {
    return integrate(m, p, z, steps).z_tau;
  };
  const PhasePoint qp = flow({z0.q + fd_step, z0.p});
  const PhasePoint qm = flow({z0.q - fd_step, z0.p});
  const PhasePoint pp = flow({z0.q, z0.p + fd_step});
  const PhasePoint pm = flow({z0.q, z0.p - fd_step});
  const double dqdq = (qp.q - qm.q) / (2.0 * fd_step);
  const double dpdq = (qp.p - qm.p) / (2.0 * fd_step);
  const double dqdp = (pp.q - pm.q) / (2.0 * fd_step);
  const double dpdp = (pp.p - pm.p) / (2.0 * fd_step);
  return dqdq * dpdp - dqdp * dpdq;
}

JarzynskiEstimate jarzynski_estimate(const WorkEnsemble& e, std::size_t resamples) {
  if (e.works.size() < 2) throw std::invalid_argument("jarzynski estimate needs >= 2 works");
  std::vector<double> expw(e.works.size());
  for (std::size_t i = 0; i < expw.size(); ++i) expw[i] = std::exp(-e.beta * e.works[i]);
  JarzynskiEstimate j;
  j.estimate = mean(expw);
  j.standard_error = bootstrap_se_mean(expw, resamples, e.master_seed ^ 0xb005ULL);
  j.resamples = resamples;
  return j;
}

bool jensen_check(const WorkEnsemble& e, double delta_f) {
  const double mw = mean(e.works);
  const double se = standard_error_of_mean(e.works);
  return mw >= delta_f - 3.0 * se;
}

GeneralizedCheck generalized_jarzynski_check(const ClassicalModel& m, const ForceProtocol& p,
                                             const std::vector<double>& u, PathObservable b,
                                             double beta, std::size_t n, std::size_t steps,
                                             std::uint64_t seed, unsigned threads) {
  if (u.size() != steps + 1)
    throw std::domain_error("u grid mismatch: expected " + std::to_string(steps + 1) +
                            " node values, got " + std::to_string(u.size()));
  const double dt = p.tau() / static_cast<double>(steps);
  const int eta_b = reversal_parity(b);
  auto value = [&](const PhasePoint& z) {
    return b == PathObservable::position ? z.q : z.p;
  };

  // forward side: < exp(int u B dt - beta W) >
  const auto fwd0 = sample_gibbs(m, p.initial_value(), beta, n, seed);
  std::vector<double> lhs_terms(n);
  parallel_for(n, threads, [&](std::size_t i) {
    double acc = 0.0;
    double w_energy_start = m.hamiltonian(fwd0[i], p.initial_value());
    double w = 0.0;
    integrate_observed(m, p, fwd0[i], steps,
                       [&](std::size_t k, double, const PhasePoint& z) {
                         acc += trapezoid_weight(k, steps) * u[k] * value(z);
                         if (k == steps) w = m.hamiltonian(z, p.final_value()) - w_energy_start;
                       });
    lhs_terms[i] = std::exp(acc * dt - beta * w);
  });

  // reverse side: u~_k = eta_B u_(steps - k) on the same node grid
  const ForceProtocol rev = p.backward();
  const auto bwd0 = sample_gibbs(m, rev.initial_value(), beta, n, seed ^ 0x5eedULL);
  std::vector<double> rhs_terms(n);
  parallel_for(n, threads, [&](std::size_t i) {
    double acc = 0.0;
    integrate_observed(m, rev, bwd0[i], steps,
                       [&](std::size_t k, double, const PhasePoint& z) {
                         acc += trapezoid_weight(k, steps) *
                                (static_cast<double>(eta_b) * u[steps - k]) * value(z);
                       });
    rhs_terms[i] = std::exp(acc * dt);
  });

  const double delta_f =
      m.free_energy_difference(p.initial_value(), p.final_value(), beta);

  GeneralizedCheck g;
  g.lhs = mean(lhs_terms);
  g.lhs_se = bootstrap_se_mean(lhs_terms, 1000, seed ^ 0x11ULL);
  const double factor = std::exp(-beta * delta_f);
  g.rhs = factor * mean(rhs_terms);
  g.rhs_se = factor * bootstrap_se_mean(rhs_terms, 1000, seed ^ 0x22ULL);
  return g;
}

}  // namespace fluctuant
