#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fluctuant/propagator.hpp"
#include "fluctuant/quantum_model.hpp"
#include "fluctuant/spectral.hpp"
#include "fluctuant/tpm.hpp"

using namespace fluctuant;

namespace {
const ForceProtocol kRamp(LinearRampShape{0.0, 1.0}, 1.0, 1);
}

TEST_CASE("propagators are unitary") {
  for (const auto& m : QuantumModel::catalog()) {
    const ForceProtocol p(LinearRampShape{0.0, 1.0}, 1.0, m.eta_q());
    const auto u = propagator(m, p, 128);
    const auto d = m.dimension();
    CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(d, d)).norm() < 1e-12);
  }
}

TEST_CASE("zero-span propagator is the identity") {
  const auto m = QuantumModel::two_level_zx();
  const auto u = propagator_over(m, kRamp, 0.0, 64);
  CHECK((u - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("propagation beyond the window is rejected") {
  const auto m = QuantumModel::two_level_zx();
  CHECK_THROWS_AS(propagator_over(m, kRamp, 1.5, 64), std::domain_error);
  CHECK_THROWS_AS(propagator_over(m, kRamp, -0.1, 64), std::domain_error);
}

TEST_CASE("constant drive reproduces the exact exponential") {
  const auto m = QuantumModel::two_level_zx();
  const ForceProtocol still(ConstantShape{0.7}, 2.0, 1);
  const auto u = propagator(m, still, 1);  // one slice suffices: H is constant
  const auto h = m.hamiltonian(0.7);
  const auto expected = hermitian_function(h, [](double e) {
    return std::exp(std::complex<double>(0.0, -2.0 * e));  // hbar = 1, t = 2
  });
  CHECK((u - expected).norm() < 1e-12);
}

TEST_CASE("tpm probabilities are a normalized distribution") {
  for (const auto& m : QuantumModel::catalog()) {
    const ForceProtocol p(LinearRampShape{0.0, 1.0}, 1.0, m.eta_q());
    const auto d = tpm_distribution(m, p, 1.0, 64);
    double total = 0.0;
    for (const auto& e : d.entries) {
      CHECK(e.p >= 0.0);
      CHECK(e.w == doctest::Approx(e.e_final - e.e_initial).epsilon(1e-14));
      total += e.p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sudden quench ground-state survival is cos^2(pi/8)") {
  // U = identity: p(m|n) are squared eigenvector overlaps between sigma_z and
  // sigma_z - sigma_x; the ground-to-ground overlap is cos^2(pi/8) = (2+sqrt 2)/4.
  const auto m = QuantumModel::two_level_zx();
  const double beta = 1.0;
  const auto d = tpm_from_unitary(m.hamiltonian(0.0), m.hamiltonian(1.0),
                                  Eigen::MatrixXcd::Identity(2, 2), beta);
  REQUIRE(d.entries.size() == 4);
  const double p_ground = std::exp(beta) / (2.0 * std::cosh(beta));
  // initial level n=0 (E=-1), final level m=0 (E=-sqrt 2)
  const auto& e00 = d.entries.front();
  CHECK(e00.n == 0);
  CHECK(e00.m == 0);
  CHECK(e00.e_initial == doctest::Approx(-1.0));
  CHECK(e00.e_final == doctest::Approx(-std::sqrt(2.0)));
  CHECK(e00.p == doctest::Approx(p_ground * (2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-12));
}

TEST_CASE("quantum jarzynski equals the partition ratio at any slice count") {
  for (const auto& m : QuantumModel::catalog()) {
    const ForceProtocol p(LinearRampShape{0.0, 1.0}, 1.0, m.eta_q());
    for (std::size_t slices : {1ul, 7ul, 64ul}) {
      const auto d = tpm_distribution(m, p, 1.0, slices);
      CHECK(std::abs(quantum_jarzynski(d) - d.z_final / d.z_initial) < 1e-12);
    }
  }
}

TEST_CASE("work aggregation merges degenerate values") {
  // commuting ramp to lambda = 1 collapses H to zero: works are +-1 only
  const auto m = QuantumModel::commuting_zz();
  const auto d = tpm_distribution(m, kRamp, 1.0, 16);
  const auto atoms = aggregate_work(d);
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0].w == doctest::Approx(-1.0));
  CHECK(atoms[1].w == doctest::Approx(1.0));
  double total = 0.0;
  for (const auto& a : atoms) total += a.p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quantum crooks deviation is tiny for catalog models") {
  for (const auto& m : QuantumModel::catalog()) {
    const ForceProtocol p(LinearRampShape{0.0, 1.0}, 1.0, m.eta_q());
    const auto fwd = tpm_distribution(m, p, 1.0, 512, 1e-9, "forward");
    const auto bwd = tpm_distribution(m, p.backward(), 1.0, 512, 1e-9, "backward");
    const double delta_f = -std::log(fwd.z_final / fwd.z_initial);
    CHECK(quantum_crooks_check(fwd, bwd, delta_f) < 1e-10);
  }
}

TEST_CASE("crooks check flags unrelated distributions") {
  const auto m = QuantumModel::two_level_zx();
  const ForceProtocol other(LinearRampShape{0.0, 2.0}, 1.0, 1);  // different endpoint
  const auto fwd = tpm_distribution(m, kRamp, 1.0, 64);
  const auto bwd = tpm_distribution(m, other.backward(), 1.0, 64, 1e-9, "backward");
  const double delta_f = -std::log(fwd.z_final / fwd.z_initial);
  CHECK_THROWS_AS(quantum_crooks_check(fwd, bwd, delta_f), std::runtime_error);
}

TEST_CASE("quantum microreversibility vanishes bitwise at t = tau") {
  const auto m = QuantumModel::two_level_zx();
  CHECK(check_quantum_microreversibility(m, kRamp, 1.0, 256) == 0.0);
}

TEST_CASE("quantum microreversibility converges at second order inside") {
  const auto m = QuantumModel::two_level_zx();
  const double d1 = check_quantum_microreversibility(m, kRamp, 0.5, 1024);
  const double d2 = check_quantum_microreversibility(m, kRamp, 0.5, 512);
  CHECK(d1 < 1e-6);
  CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("quantum microreversibility holds for the odd-parity drive") {
  const auto m = QuantumModel::two_level_zy();
  const ForceProtocol p(LinearRampShape{0.0, 1.0}, 1.0, -1);
  const double d1 = check_quantum_microreversibility(m, p, 0.25, 1024);
  CHECK(d1 < 1e-6);
}

TEST_CASE("off-grid times are rejected") {
  const auto m = QuantumModel::two_level_zx();
  CHECK_THROWS_AS(check_quantum_microreversibility(m, kRamp, 0.1234, 100), std::domain_error);
}

TEST_CASE("operator work exponent gap: commuting case closes, generic case opens") {
  const auto agree = operator_work_counterexample(QuantumModel::commuting_zz(), kRamp, 1.0, 64);
  CHECK(agree.gap < 1e-12);

  const auto differ = operator_work_counterexample(QuantumModel::two_level_zx(), kRamp, 1.0, 1024);
  CHECK(differ.gap > 1e-3);
  CHECK(differ.ratio_side ==
        doctest::Approx(std::cosh(std::sqrt(2.0)) / std::cosh(1.0)).epsilon(1e-10));
}

TEST_CASE("constant protocols leave the exponentiated work at unity") {
  const auto m = QuantumModel::two_level_zx();
  const ForceProtocol still(ConstantShape{0.4}, 1.0, 1);
  const auto d = tpm_distribution(m, still, 2.0, 32);
  CHECK(quantum_jarzynski(d) == doctest::Approx(1.0).epsilon(1e-12));
}
