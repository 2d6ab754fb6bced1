#pragma once

#include <cstdint>
#include <vector>

namespace fluctuant {

struct BrownianConfig {
  double gamma = 1.0;  // drag
  double k_b_t = 1.0;  // temperature in energy units
  double force = 0.0;  // constant applied force
  double dt = 1e-3;
  std::size_t n_steps = 1000;
  std::size_t n_particles = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

// Positions recorded on a coarse grid (every `stride` steps) plus the exact
// endpoints; row i is particle i. Memory stays modest even for long runs.
struct BrownianEnsemble {
  std::vector<double> record_times;
  std::vector<std::vector<double>> positions;  // [particle][record index]
  double duration = 0.0;

  std::vector<double> mean_displacement() const;
  std::vector<double> msd() const;
};

// Overdamped Euler-Maruyama: x += (F/gamma) dt + sqrt(2 k_B T dt / gamma) xi.
BrownianEnsemble simulate_overdamped(const BrownianConfig& c, std::size_t max_records = 201,
                                     unsigned threads = 1);

struct EstimateWithError {
  double value = 0.0;
  double standard_error = 0.0;
};

// Drift mobility mu = <x(T) - x(0)> / (T F); domain error when F = 0.
EstimateWithError estimate_mobility(const BrownianEnsemble& e, double force);

// Slope of var(x(t) - x(0)) against 2t over the second half of the record grid;
// centering on the ensemble mean removes the ballistic drift term, so the fit
// is valid at any applied force. The SE comes from the spread of per-particle
// slopes (the ensemble slope is their mean).
EstimateWithError estimate_diffusion(const BrownianEnsemble& e);

struct EinsteinCheck {
  EstimateWithError mobility;
  EstimateWithError diffusion;
  double gap = 0.0;          // |mu - D / k_B T|
  double combined_se = 0.0;
  bool pass = false;
};

EinsteinCheck einstein_check(const EstimateWithError& mobility,
                             const EstimateWithError& diffusion, double k_b_t);

// Final-time positions in a harmonic trap U = k x^2 / 2 (force field -k x);
// run length should cover several relaxation times gamma/k so the ensemble
// reaches the Boltzmann profile N(0, k_B T / k).
std::vector<double> sample_trap_positions(const BrownianConfig& c, double stiffness,
                                          unsigned threads = 1);

}  // namespace fluctuant
