#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fluctuant/brownian.hpp"
#include "fluctuant/stats.hpp"

using namespace fluctuant;

namespace {

BrownianConfig quick_config() {
  BrownianConfig c;
  c.gamma = 1.0;
  c.k_b_t = 1.0;
  c.force = 1.0;
  c.dt = 1e-3;
  c.n_steps = 2000;
  c.n_particles = 6000;
  c.seed = 2024;
  return c;
}

}  // namespace

TEST_CASE("config validation rejects nonsense") {
  auto c = quick_config();
  c.gamma = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = quick_config();
  c.k_b_t = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = quick_config();
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = quick_config();
  c.n_particles = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("records cover [0, T] with exact endpoints") {
  const auto e = simulate_overdamped(quick_config(), 101);
  REQUIRE(!e.record_times.empty());
  CHECK(e.record_times.front() == 0.0);
  CHECK(e.record_times.back() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.positions.size() == 6000);
  for (const auto& p : e.positions) CHECK(p.size() == e.record_times.size());
  CHECK(e.duration == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("mean displacement follows the drift") {
  const auto e = simulate_overdamped(quick_config(), 101);
  const auto md = e.mean_displacement();
  // <x(T)> = (F/gamma) T = 2 with SE ~ sqrt(2 D T / n) ~ 0.026
  CHECK(md.back() == doctest::Approx(2.0).epsilon(0.05));
  CHECK(md.front() == 0.0);
}

TEST_CASE("mobility and diffusion land on their closed forms") {
  auto c = quick_config();
  c.n_particles = 20000;
  c.n_steps = 4000;
  const auto e = simulate_overdamped(c, 151);
  const auto mu = estimate_mobility(e, c.force);
  const auto d = estimate_diffusion(e);
  CHECK(mu.value == doctest::Approx(1.0).epsilon(0.05));
  CHECK(d.value == doctest::Approx(1.0).epsilon(0.10));
  CHECK(mu.standard_error > 0.0);
  CHECK(d.standard_error > 0.0);

  const auto check = einstein_check(mu, d, c.k_b_t);
  CHECK(check.gap == doctest::Approx(std::abs(mu.value - d.value)).epsilon(1e-12));
  CHECK(check.pass);
}

TEST_CASE("diffusion estimate is immune to the drift term") {
  auto with_force = quick_config();
  auto no_force = quick_config();
  no_force.force = 0.0;
  with_force.force = 5.0;  // strong drift: (F t)^2 dwarfs 2 D t
  const auto d_drift = estimate_diffusion(simulate_overdamped(with_force, 101));
  const auto d_free = estimate_diffusion(simulate_overdamped(no_force, 101));
  // same seed, same noise stream: centering must recover the same slope scale
  CHECK(d_drift.value == doctest::Approx(d_free.value).epsilon(1e-9));
}

TEST_CASE("mobility needs a nonzero force") {
  const auto e = simulate_overdamped(quick_config(), 51);
  CHECK_THROWS_AS(estimate_mobility(e, 0.0), std::domain_error);
}

TEST_CASE("trap positions follow the Boltzmann profile") {
  auto c = quick_config();
  c.force = 0.0;
  c.n_steps = 8000;
  c.n_particles = 4000;
  c.seed = 99;
  const double stiffness = 2.0;
  const auto xs = sample_trap_positions(c, stiffness);
  const double sigma = std::sqrt(c.k_b_t / stiffness);
  const double d = ks_statistic(xs, [sigma](double x) { return normal_cdf(x, 0.0, sigma); });
  CHECK(ks_pvalue(d, xs.size()) > 0.01);
}

TEST_CASE("simulation is reproducible and thread-count independent") {
  const auto a = simulate_overdamped(quick_config(), 51, 1);
  const auto b = simulate_overdamped(quick_config(), 51, 4);
  REQUIRE(a.positions.size() == b.positions.size());
  for (std::size_t i = 0; i < a.positions.size(); ++i)
    CHECK(a.positions[i] == b.positions[i]);
}
