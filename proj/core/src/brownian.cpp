#include "fluctuant/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include "fluctuant/rng.hpp"

namespace fluctuant {

namespace {

void parallel_particles(std::size_t n, unsigned threads,
                        const std::function<void(std::size_t)>& body) {
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

}  // namespace

void BrownianConfig::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(k_b_t > 0.0)) throw std::invalid_argument("k_B T must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (n_steps < 1) throw std::invalid_argument("need at least one step");
  if (n_particles < 2) throw std::invalid_argument("need at least two particles");
}

std::vector<double> BrownianEnsemble::mean_displacement() const {
  std::vector<double> out(record_times.size(), 0.0);
  for (const auto& path : positions)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += path[j] - path[0];
  for (auto& v : out) v /= static_cast<double>(positions.size());
  return out;
}

std::vector<double> BrownianEnsemble::msd() const {
  std::vector<double> out(record_times.size(), 0.0);
  for (const auto& path : positions)
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double d = path[j] - path[0];
      out[j] += d * d;
    }
  for (auto& v : out) v /= static_cast<double>(positions.size());
  return out;
}

BrownianEnsemble simulate_overdamped(const BrownianConfig& c, std::size_t max_records,
                                     unsigned threads) {
  c.validate();
  const std::size_t stride = std::max<std::size_t>(1, c.n_steps / std::max<std::size_t>(1, max_records - 1));
  std::vector<std::size_t> record_steps;
  for (std::size_t s = 0; s <= c.n_steps; s += stride) record_steps.push_back(s);
  if (record_steps.back() != c.n_steps) record_steps.push_back(c.n_steps);

  BrownianEnsemble e;
  e.duration = c.dt * static_cast<double>(c.n_steps);
  e.record_times.reserve(record_steps.size());
  for (auto s : record_steps) e.record_times.push_back(c.dt * static_cast<double>(s));
  e.positions.assign(c.n_particles, {});

  const double drift = c.force / c.gamma * c.dt;
  const double sigma = std::sqrt(2.0 * c.k_b_t * c.dt / c.gamma);
  parallel_particles(c.n_particles, threads, [&](std::size_t i) {
    auto rng = stream_rng(c.seed, i);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto& path = e.positions[i];
    path.reserve(record_steps.size());
    double x = 0.0;
    std::size_t next = 0;
    for (std::size_t s = 0; s <= c.n_steps; ++s) {
      if (next < record_steps.size() && s == record_steps[next]) {
        path.push_back(x);
        ++next;
      }
      if (s < c.n_steps) x += drift + sigma * gauss(rng);
    }
  });
  return e;
}

EstimateWithError estimate_mobility(const BrownianEnsemble& e, double force) {
  if (force == 0.0)
    throw std::domain_error("mobility is undefined at zero applied force");
  const double t = e.duration;
  std::vector<double> v(e.positions.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = (e.positions[i].back() - e.positions[i].front()) / t;
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  var /= static_cast<double>(v.size() - 1);
  return {m / force, std::sqrt(var / static_cast<double>(v.size())) / std::abs(force)};
}

EstimateWithError estimate_diffusion(const BrownianEnsemble& e) {
  const std::size_t nrec = e.record_times.size();
  const std::size_t lo = nrec / 2;  // fit over the second half
  if (nrec - lo < 2) throw std::invalid_argument("too few records for a diffusion fit");
  const std::size_t np = e.positions.size();

  // var(x(t) - x(0)) = 2 D t for any applied force; centering on the ensemble
  // mean removes the ballistic (F t / gamma)^2 term exactly
  const auto md = e.mean_displacement();

  // least squares y = a + D * (2t); slope of the ensemble variance equals the
  // mean of per-particle slopes, whose spread provides the standard error
  std::vector<double> x;
  for (std::size_t j = lo; j < nrec; ++j) x.push_back(2.0 * e.record_times[j]);
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sxx = 0.0;
  for (double xi : x) {
    sx += xi;
    sxx += xi * xi;
  }
  const double det = n * sxx - sx * sx;
  if (det <= 0.0) throw std::invalid_argument("degenerate time grid for diffusion fit");

  const double bessel = static_cast<double>(np) / static_cast<double>(np - 1);
  std::vector<double> slopes(np);
  for (std::size_t i = 0; i < np; ++i) {
    double sy = 0.0, sxy = 0.0;
    for (std::size_t j = lo; j < nrec; ++j) {
      const double d = e.positions[i][j] - e.positions[i][0] - md[j];
      const double y = bessel * d * d;
      sy += y;
      sxy += x[j - lo] * y;
    }
    slopes[i] = (n * sxy - sx * sy) / det;
  }
  double m = 0.0;
  for (double s : slopes) m += s;
  m /= static_cast<double>(slopes.size());
  double var = 0.0;
  for (double s : slopes) var += (s - m) * (s - m);
  var /= static_cast<double>(slopes.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(slopes.size()))};
}

EinsteinCheck einstein_check(const EstimateWithError& mobility,
                             const EstimateWithError& diffusion, double k_b_t) {
  EinsteinCheck c;
  c.mobility = mobility;
  c.diffusion = diffusion;
  c.gap = std::abs(mobility.value - diffusion.value / k_b_t);
  c.combined_se = std::hypot(mobility.standard_error, diffusion.standard_error / k_b_t);
  c.pass = c.gap <= 3.0 * c.combined_se;
  return c;
}

std::vector<double> sample_trap_positions(const BrownianConfig& c, double stiffness,
                                          unsigned threads) {
  c.validate();
  if (!(stiffness > 0.0)) throw std::invalid_argument("trap stiffness must be positive");
  const double sigma = std::sqrt(2.0 * c.k_b_t * c.dt / c.gamma);
  std::vector<double> out(c.n_particles);
  parallel_particles(c.n_particles, threads, [&](std::size_t i) {
    auto rng = stream_rng(c.seed, i);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double x = 0.0;
    for (std::size_t s = 0; s < c.n_steps; ++s)
      x += (-stiffness * x / c.gamma) * c.dt + sigma * gauss(rng);
    out[i] = x;
  });
  return out;
}

}  // namespace fluctuant
