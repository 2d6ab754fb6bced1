#include "fluctuant/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "fluctuant/brownian.hpp"
#include "fluctuant/classical_engine.hpp"
#include "fluctuant/classical_model.hpp"
#include "fluctuant/io.hpp"
#include "fluctuant/linear_response.hpp"
#include "fluctuant/propagator.hpp"
#include "fluctuant/protocol.hpp"
#include "fluctuant/quantum_model.hpp"
#include "fluctuant/rng.hpp"
#include "fluctuant/spectral.hpp"
#include "fluctuant/stats.hpp"
#include "fluctuant/tpm.hpp"

namespace fluctuant {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// strict config access

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + context);
}

const json& require_key(const json& obj, const std::string& key, const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing key \"" + key + "\" in " + context);
  return *it;
}

double num(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = require_key(obj, key, ctx);
  if (!v.is_number()) throw ConfigError("key \"" + key + "\" in " + ctx + " must be a number");
  return v.get<double>();
}

double num_or(const json& obj, const std::string& key, double fallback, const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  return num(obj, key, ctx);
}

double positive_num(const json& obj, const std::string& key, const std::string& ctx) {
  const double v = num(obj, key, ctx);
  if (!(v > 0.0))
    throw ConfigError("key \"" + key + "\" in " + ctx + " must be positive");
  return v;
}

std::int64_t integer(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = require_key(obj, key, ctx);
  if (!v.is_number_integer())
    throw ConfigError("key \"" + key + "\" in " + ctx + " must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t integer_or(const json& obj, const std::string& key, std::int64_t fallback,
                        const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  return integer(obj, key, ctx);
}

std::size_t count(const json& obj, const std::string& key, const std::string& ctx) {
  const std::int64_t v = integer(obj, key, ctx);
  if (v < 1)
    throw ConfigError("key \"" + key + "\" in " + ctx + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::size_t count_or(const json& obj, const std::string& key, std::int64_t fallback,
                     const std::string& ctx) {
  if (!obj.contains(key)) return static_cast<std::size_t>(fallback);
  return count(obj, key, ctx);
}

std::string text(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = require_key(obj, key, ctx);
  if (!v.is_string()) throw ConfigError("key \"" + key + "\" in " + ctx + " must be a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------------------
// sub-object parsers

ForceProtocol parse_protocol(const json& obj) {
  static const std::set<std::string> common = {"shape", "tau", "eta_q", "grid_points"};
  const std::string ctx = "protocol";
  const std::string shape = text(obj, "shape", ctx);
  const double tau = num(obj, "tau", ctx);
  const int eta_q = static_cast<int>(integer_or(obj, "eta_q", 1, ctx));
  const std::int64_t grid_raw = integer_or(obj, "grid_points", 1000, ctx);
  if (grid_raw < 2) throw ConfigError("protocol grid_points must be at least 2");
  const auto grid = static_cast<std::size_t>(grid_raw);

  try {
    if (shape == "constant") {
      std::set<std::string> allowed = common;
      allowed.insert("value");
      reject_unknown(obj, allowed, ctx);
      return ForceProtocol(ConstantShape{num(obj, "value", ctx)}, tau, eta_q, grid);
    }
    if (shape == "linear_ramp") {
      std::set<std::string> allowed = common;
      allowed.insert("from");
      allowed.insert("to");
      reject_unknown(obj, allowed, ctx);
      return ForceProtocol(LinearRampShape{num(obj, "from", ctx), num(obj, "to", ctx)}, tau,
                           eta_q, grid);
    }
    if (shape == "sinusoid") {
      std::set<std::string> allowed = common;
      allowed.insert("amplitude");
      allowed.insert("omega");
      allowed.insert("phase");
      reject_unknown(obj, allowed, ctx);
      return ForceProtocol(SinusoidShape{num(obj, "amplitude", ctx), num(obj, "omega", ctx),
                                         num_or(obj, "phase", 0.0, ctx)},
                           tau, eta_q, grid);
    }
    if (shape == "piecewise_linear") {
      std::set<std::string> allowed = common;
      allowed.insert("knots");
      reject_unknown(obj, allowed, ctx);
      const json& kn = require_key(obj, "knots", ctx);
      if (!kn.is_array()) throw ConfigError("protocol knots must be an array of [t, value]");
      PiecewiseLinearShape pw;
      for (const auto& pair : kn) {
        if (!pair.is_array() || pair.size() != 2)
          throw ConfigError("each protocol knot must be a [t, value] pair");
        pw.knots.emplace_back(pair[0].get<double>(), pair[1].get<double>());
      }
      return ForceProtocol(std::move(pw), tau, eta_q, grid);
    }
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("invalid protocol: ") + err.what());
  }
  throw ConfigError("unknown protocol shape \"" + shape + "\"");
}

// rebuild the shape with all drive values multiplied by `factor`
ForceProtocol scale_protocol(const ForceProtocol& p, double factor) {
  ProtocolShape shape = p.shape();
  std::visit(
      [factor](auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantShape>) {
          s.value *= factor;
        } else if constexpr (std::is_same_v<S, LinearRampShape>) {
          s.from *= factor;
          s.to *= factor;
        } else if constexpr (std::is_same_v<S, SinusoidShape>) {
          s.amplitude *= factor;
        } else {
          for (auto& [t, v] : s.knots) v *= factor;
        }
      },
      shape);
  return ForceProtocol(std::move(shape), p.tau(), p.eta_q(), p.grid_points());
}

ClassicalModel parse_classical_model(const json& obj) {
  const std::string ctx = "model";
  const std::string kind = text(obj, "kind", ctx);
  try {
    if (kind == "harmonic") {
      reject_unknown(obj, {"kind", "m", "k"}, ctx);
      return ClassicalModel::harmonic(num(obj, "m", ctx), num(obj, "k", ctx));
    }
    if (kind == "quartic") {
      reject_unknown(obj, {"kind", "m", "k", "g"}, ctx);
      return ClassicalModel::quartic(num(obj, "m", ctx), num(obj, "k", ctx), num(obj, "g", ctx));
    }
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("invalid model: ") + err.what());
  }
  throw ConfigError("unknown classical model kind \"" + kind + "\"");
}

Eigen::MatrixXd parse_real_matrix(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty())
    throw ConfigError(what + " must be a non-empty array of rows");
  const std::size_t n = v.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_array() || v[i].size() != n)
      throw ConfigError(what + " must be square (row " + std::to_string(i) + " mismatches)");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i][j].get<double>();
  }
  return m;
}

QuantumModel parse_quantum_model(const json& obj) {
  const std::string ctx = "model";
  if (obj.is_string()) {  // bare catalog name
    const auto kind = obj.get<std::string>();
    for (const auto& m : QuantumModel::catalog())
      if (m.name() == kind) return m;
    throw ConfigError("unknown quantum model \"" + kind + "\"");
  }
  const std::string kind = text(obj, "kind", ctx);
  if (kind == "custom") {
    reject_unknown(obj, {"kind", "h0", "q", "eta_q", "hbar"}, ctx);
    try {
      return QuantumModel(parse_real_matrix(require_key(obj, "h0", ctx), "model.h0"),
                          parse_real_matrix(require_key(obj, "q", ctx), "model.q"),
                          static_cast<int>(integer(obj, "eta_q", ctx)),
                          num_or(obj, "hbar", 1.0, ctx));
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("invalid model: ") + err.what());
    }
  }
  reject_unknown(obj, {"kind"}, ctx);
  for (const auto& m : QuantumModel::catalog())
    if (m.name() == kind) return m;
  throw ConfigError("unknown quantum model kind \"" + kind + "\"");
}

Eigen::MatrixXcd parse_observable(const json& cfg, const QuantumModel& m) {
  const std::string which =
      cfg.contains("observable") ? text(cfg, "observable", "config") : "drive";
  if (which == "drive") return m.q_operator();
  if (which == "h0") return m.h0();
  if (which == "identity")
    return Eigen::MatrixXcd::Identity(m.dimension(), m.dimension());
  throw ConfigError("unknown observable \"" + which + "\" (use drive, h0 or identity)");
}

// ---------------------------------------------------------------------------
// summary helpers

json estimate_json(double value, double se) {
  return json{{"value", value}, {"standard_error", se}};
}

void write_summary(const std::string& dir, const json& summary) {
  std::ofstream out(dir + "/summary.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + dir + "/summary.json");
  out << summary.dump(2) << '\n';
}

void write_trajectories(const std::string& path, const std::vector<TrajectoryRecord>& recs) {
  CsvWriter csv(path, {"index", "q0", "p0", "q_tau", "p_tau", "work_energy", "work_integral"});
  for (std::size_t i = 0; i < recs.size(); ++i)
    csv.row({static_cast<double>(i), recs[i].z0.q, recs[i].z0.p, recs[i].z_tau.q,
             recs[i].z_tau.p, recs[i].work_energy, recs[i].work_integral});
}

void write_tpm(const std::string& path, const TPMDistribution& d) {
  CsvWriter csv(path, {"n", "m", "E_n_initial", "E_m_final", "w", "p"});
  for (const auto& e : d.entries)
    csv.row({static_cast<double>(e.n), static_cast<double>(e.m), e.e_initial, e.e_final, e.w,
             e.p});
}

bool all_true(const json& checks) {
  for (const auto& [key, value] : checks.items()) {
    (void)key;
    if (value.is_boolean() && !value.get<bool>()) return false;
  }
  return true;
}

struct Ctx {
  std::string dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<std::string> files;

  std::string path(const std::string& name) {
    files.push_back(name);
    return dir + "/" + name;
  }
};

// ---------------------------------------------------------------------------
// experiment drivers

json run_classical_jarzynski(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "protocol", "beta", "n_trajectories", "steps",
                       "bootstrap_resamples", "seed", "output_dir"},
                 "config");
  const auto model = parse_classical_model(require_key(cfg, "model", "config"));
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  if (protocol.eta_q() != model.eta_q())
    throw ConfigError("protocol eta_q must be +1 for position-coupled classical models");
  const double beta = positive_num(cfg, "beta", "config");
  const auto n = count(cfg, "n_trajectories", "config");
  const auto steps = count_or(cfg, "steps", static_cast<std::int64_t>(protocol.grid_points()), "config");
  const auto resamples =
      count_or(cfg, "bootstrap_resamples", 1000, "config");

  const auto records = run_ensemble(model, protocol, beta, n, steps, ctx.seed, ctx.threads);
  const auto ensemble = make_work_ensemble(records, beta, "forward", ctx.seed);
  const auto jz = jarzynski_estimate(ensemble, resamples);
  const double delta_f =
      model.free_energy_difference(protocol.initial_value(), protocol.final_value(), beta);
  const double target = std::exp(-beta * delta_f);
  const bool jensen = jensen_check(ensemble, delta_f);
  const double mean_w = mean(ensemble.works);

  write_trajectories(ctx.path("trajectories.csv"), records);

  json checks;
  checks["jarzynski_within_3se"] = std::abs(jz.estimate - target) <= 3.0 * jz.standard_error;
  checks["jensen_mean_work_ge_delta_f"] = jensen;

  json summary;
  summary["experiment"] = "classical_jarzynski";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"beta", beta},
                       {"n_trajectories", n},
                       {"steps", steps},
                       {"bootstrap_resamples", resamples}};
  summary["estimates"] = {
      {"exp_minus_beta_work", estimate_json(jz.estimate, jz.standard_error)},
      {"target_exp_minus_beta_delta_f", target},
      {"delta_f_reference", delta_f},
      {"mean_work", mean_w},
      {"dissipated_work", mean_w - delta_f}};
  summary["tolerances"] = {{"sigma_window", 3.0}};
  summary["checks"] = checks;
  return summary;
}

json run_classical_crooks(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "protocol", "beta", "n_trajectories", "steps",
                       "bin_count", "min_bin_count", "slope_rel_tol", "delta_f_tol", "seed",
                       "output_dir"},
                 "config");
  const auto model = parse_classical_model(require_key(cfg, "model", "config"));
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  if (protocol.eta_q() != model.eta_q())
    throw ConfigError("protocol eta_q must be +1 for position-coupled classical models");
  const double beta = positive_num(cfg, "beta", "config");
  const auto n = count(cfg, "n_trajectories", "config");
  const auto steps = count_or(cfg, "steps", static_cast<std::int64_t>(protocol.grid_points()), "config");
  const std::int64_t bins_raw = integer_or(cfg, "bin_count", 0, "config");
  if (bins_raw < 0) throw ConfigError("key \"bin_count\" in config must not be negative");
  const auto bin_count = static_cast<std::size_t>(bins_raw);
  const auto min_count = count_or(cfg, "min_bin_count", 10, "config");
  const double slope_tol = num_or(cfg, "slope_rel_tol", 0.05, "config");
  const double df_tol = num_or(cfg, "delta_f_tol", 0.05, "config");

  const auto fwd = run_ensemble(model, protocol, beta, n, steps, ctx.seed, ctx.threads);
  const auto bwd = run_ensemble(model, protocol.backward(), beta, n, steps,
                                splitmix64(ctx.seed ^ 0x5eedULL), ctx.threads);
  write_trajectories(ctx.path("forward_trajectories.csv"), fwd);
  write_trajectories(ctx.path("backward_trajectories.csv"), bwd);

  const auto fe = make_work_ensemble(fwd, beta, "forward", ctx.seed);
  const auto be = make_work_ensemble(bwd, beta, "backward", splitmix64(ctx.seed ^ 0x5eedULL));
  std::vector<double> mirrored(be.works.size());
  for (std::size_t i = 0; i < mirrored.size(); ++i) mirrored[i] = -be.works[i];

  const auto edges = shared_edges(fe.works, mirrored, bin_count);
  const auto h_fwd = histogram_with_edges(fe.works, edges);
  const auto h_bwd = histogram_with_edges(mirrored, edges);

  const double delta_f_ref =
      model.free_energy_difference(protocol.initial_value(), protocol.final_value(), beta);
  const auto jz = jarzynski_estimate(fe);
  const double delta_f_jarzynski = -std::log(jz.estimate) / beta;

  const auto reg = crooks_regression(h_fwd, h_bwd, min_count);  // may throw: insufficient overlap

  {
    CsvWriter csv(ctx.path("histogram.csv"),
                  {"bin_center", "density_forward", "density_backward_mirrored", "log_ratio"});
    for (std::size_t i = 0; i < h_fwd.bins(); ++i) {
      const double pf = h_fwd.densities[i], pb = h_bwd.densities[i];
      const double lr = (pf > 0.0 && pb > 0.0) ? std::log(pf / pb)
                                               : std::numeric_limits<double>::quiet_NaN();
      csv.row({h_fwd.center(i), pf, pb, lr});
    }
  }

  // crossing point: admissible bin with the smallest |log ratio|
  double crossing = std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reg.bin_centers.size(); ++i)
    if (std::abs(reg.log_ratios[i]) < best) {
      best = std::abs(reg.log_ratios[i]);
      crossing = reg.bin_centers[i];
    }

  json checks;
  checks["slope_matches_beta"] = std::abs(reg.slope - beta) <= slope_tol * beta;
  checks["delta_f_within_tol"] = std::abs(reg.delta_f - delta_f_ref) <= df_tol;

  json summary;
  summary["experiment"] = "classical_crooks";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"beta", beta},
                       {"n_trajectories", n},
                       {"steps", steps},
                       {"bin_count", bin_count},
                       {"min_bin_count", min_count}};
  summary["estimates"] = {
      {"slope", estimate_json(reg.slope, reg.slope_se)},
      {"intercept", estimate_json(reg.intercept, reg.intercept_se)},
      {"admissible_bins", reg.admissible_bins},
      {"bin_width", h_fwd.width()},
      {"crossing_point", crossing},
      {"delta_f",
       {{"analytic", delta_f_ref},
        {"jarzynski", delta_f_jarzynski},
        {"crooks_intercept", reg.delta_f}}}};
  summary["tolerances"] = {{"slope_rel_tol", slope_tol}, {"delta_f_tol", df_tol}};
  summary["checks"] = checks;
  return summary;
}

json run_classical_microrev(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "protocol", "z0", "steps", "times", "tolerance",
                       "ratio_window", "seed", "output_dir"},
                 "config");
  const auto model = parse_classical_model(require_key(cfg, "model", "config"));
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  const auto steps = count_or(cfg, "steps", 10000, "config");
  if (steps % 8 != 0) throw ConfigError("steps must be divisible by 8");
  const double tol = num_or(cfg, "tolerance", 1e-6, "config");

  PhasePoint z0{1.0, 0.5};
  if (cfg.contains("z0")) {
    const json& z = cfg["z0"];
    reject_unknown(z, {"q", "p"}, "z0");
    z0 = {num(z, "q", "z0"), num(z, "p", "z0")};
  }
  std::vector<double> times;
  if (cfg.contains("times")) {
    for (const auto& t : cfg["times"]) times.push_back(t.get<double>());
  } else {
    for (int k = 1; k <= 5; ++k) times.push_back(protocol.tau() * k / 8.0);
  }
  double ratio_lo = 3.5, ratio_hi = 4.5;
  if (cfg.contains("ratio_window")) {
    const auto& w = cfg["ratio_window"];
    if (!w.is_array() || w.size() != 2) throw ConfigError("ratio_window must be [lo, hi]");
    ratio_lo = w[0].get<double>();
    ratio_hi = w[1].get<double>();
  }

  json rows = json::array();
  bool dev_ok = true, ratio_ok = true;
  CsvWriter csv(ctx.path("microrev.csv"), {"t", "deviation", "deviation_half_steps", "ratio"});
  for (double t : times) {
    const double dev = check_microreversibility(model, protocol, z0, t, steps);
    const double dev_half = check_microreversibility(model, protocol, z0, t, steps / 2);
    const double ratio = dev > 0.0 ? dev_half / dev : 0.0;
    csv.row({t, dev, dev_half, ratio});
    rows.push_back({{"t", t}, {"deviation", dev}, {"half_step_ratio", ratio}});
    dev_ok = dev_ok && dev < tol;
    const bool interior = t > 0.0 && t < protocol.tau();
    if (interior && dev > 1e-12) ratio_ok = ratio_ok && ratio >= ratio_lo && ratio <= ratio_hi;
  }
  const double jac = flow_jacobian_determinant(model, protocol, z0, std::min<std::size_t>(steps, 4000));

  json checks;
  checks["deviation_below_tolerance"] = dev_ok;
  checks["second_order_convergence"] = ratio_ok;
  checks["unit_jacobian"] = std::abs(jac - 1.0) < 1e-6;

  json summary;
  summary["experiment"] = "classical_microrev";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"z0", {{"q", z0.q}, {"p", z0.p}}},
                       {"steps", steps},
                       {"times", times}};
  summary["estimates"] = {{"deviations", rows}, {"jacobian_determinant", jac}};
  summary["tolerances"] = {{"deviation", tol}, {"ratio_window", {ratio_lo, ratio_hi}}};
  summary["checks"] = checks;
  return summary;
}

json run_generalized_jarzynski(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "protocol", "beta", "n_trajectories", "steps",
                       "u_amplitude", "observable", "seed", "output_dir"},
                 "config");
  const auto model = parse_classical_model(require_key(cfg, "model", "config"));
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  if (protocol.eta_q() != model.eta_q())
    throw ConfigError("protocol eta_q must be +1 for position-coupled classical models");
  const double beta = positive_num(cfg, "beta", "config");
  const auto n = count(cfg, "n_trajectories", "config");
  const auto steps = count_or(cfg, "steps", static_cast<std::int64_t>(protocol.grid_points()), "config");
  const double amp = num_or(cfg, "u_amplitude", 0.1, "config");
  const std::string obs_name =
      cfg.contains("observable") ? text(cfg, "observable", "config") : "position";
  PathObservable obs;
  if (obs_name == "position")
    obs = PathObservable::position;
  else if (obs_name == "momentum")
    obs = PathObservable::momentum;
  else
    throw ConfigError("observable must be \"position\" or \"momentum\"");

  // u_t = amp * sin(pi t / tau) on the integrator node grid
  std::vector<double> u(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k)
    u[k] = amp * std::sin(kPi * static_cast<double>(k) / static_cast<double>(steps));

  const auto check = generalized_jarzynski_check(model, protocol, u, obs, beta, n, steps,
                                                 ctx.seed, ctx.threads);

  json checks;
  checks["identity_within_3se"] = check.pass();

  json summary;
  summary["experiment"] = "generalized_jarzynski";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"beta", beta},
                       {"n_trajectories", n},
                       {"steps", steps},
                       {"u_amplitude", amp},
                       {"observable", obs_name}};
  summary["estimates"] = {{"lhs", estimate_json(check.lhs, check.lhs_se)},
                          {"rhs", estimate_json(check.rhs, check.rhs_se)},
                          {"gap", std::abs(check.lhs - check.rhs)},
                          {"combined_se", check.combined_se()}};
  summary["tolerances"] = {{"sigma_window", 3.0}};
  summary["checks"] = checks;
  return summary;
}

json run_quantum_tpm(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "protocol", "beta", "slices", "degeneracy_tol",
                       "tolerance", "seed", "output_dir"},
                 "config");
  const auto model = parse_quantum_model(require_key(cfg, "model", "config"));
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  const double beta = positive_num(cfg, "beta", "config");
  const auto slices = count_or(cfg, "slices", 256, "config");
  const double deg_tol = num_or(cfg, "degeneracy_tol", 1e-9, "config");
  const double tol = num_or(cfg, "tolerance", 1e-9, "config");

  const auto dist = tpm_distribution(model, protocol, beta, slices, deg_tol);
  write_tpm(ctx.path("tpm.csv"), dist);

  const double jz = quantum_jarzynski(dist);
  const double ratio = dist.z_final / dist.z_initial;

  // marginal over final levels must reproduce the initial Gibbs weights
  const auto d0 = spectral_decompose(model.hamiltonian(protocol.initial_value()), deg_tol);
  std::vector<double> marginal(d0.levels(), 0.0);
  for (const auto& e : dist.entries) marginal[e.n] += e.p;
  double marginal_dev = 0.0;
  for (int l = 0; l < d0.levels(); ++l) {
    const double expected =
        d0.ranks[l] * std::exp(-beta * d0.eigenvalues[l]) / dist.z_initial;
    marginal_dev = std::max(marginal_dev, std::abs(marginal[l] - expected));
  }

  json checks;
  checks["jarzynski_matches_partition_ratio"] = std::abs(jz - ratio) < tol;
  checks["initial_marginal_matches_gibbs"] = marginal_dev < 1e-10;

  json summary;
  summary["experiment"] = "quantum_tpm";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"beta", beta},
                       {"slices", slices},
                       {"degeneracy_tol", deg_tol}};
  summary["estimates"] = {{"exp_minus_beta_w_sum", jz},
                          {"partition_ratio", ratio},
                          {"identity_gap", std::abs(jz - ratio)},
                          {"marginal_max_deviation", marginal_dev},
                          {"z_initial", dist.z_initial},
                          {"z_final", dist.z_final},
                          {"entries", dist.entries.size()}};
  summary["tolerances"] = {{"identity", tol}, {"marginal", 1e-10}};
  summary["checks"] = checks;
  return summary;
}

json run_quantum_crooks(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "protocol", "beta", "slices", "merge_tol",
                       "tolerance", "seed", "output_dir"},
                 "config");
  const auto model = parse_quantum_model(require_key(cfg, "model", "config"));
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  if (protocol.eta_q() != model.eta_q())
    throw ConfigError("protocol eta_q must match the model's drive parity");
  const double beta = positive_num(cfg, "beta", "config");
  const auto slices = count_or(cfg, "slices", 4096, "config");
  const double merge_tol = num_or(cfg, "merge_tol", 1e-9, "config");
  const double tol = num_or(cfg, "tolerance", 1e-8, "config");

  const auto fwd = tpm_distribution(model, protocol, beta, slices, 1e-9, "forward");
  const auto bwd = tpm_distribution(model, protocol.backward(), beta, slices, 1e-9, "backward");
  write_tpm(ctx.path("tpm_forward.csv"), fwd);
  write_tpm(ctx.path("tpm_backward.csv"), bwd);

  const double delta_f = -std::log(fwd.z_final / fwd.z_initial) / beta;
  const double deviation = quantum_crooks_check(fwd, bwd, delta_f, merge_tol);

  json checks;
  checks["crooks_identity_below_tolerance"] = deviation < tol;

  json summary;
  summary["experiment"] = "quantum_crooks";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"beta", beta},
                       {"slices", slices},
                       {"merge_tol", merge_tol}};
  summary["estimates"] = {{"max_deviation", deviation},
                          {"delta_f", delta_f},
                          {"z_initial", fwd.z_initial},
                          {"z_final", fwd.z_final}};
  summary["tolerances"] = {{"deviation", tol}};
  summary["checks"] = checks;
  return summary;
}

json run_quantum_microrev(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "protocol", "slices", "times", "tolerance",
                       "ratio_window", "seed", "output_dir"},
                 "config");
  const auto model = parse_quantum_model(require_key(cfg, "model", "config"));
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  if (protocol.eta_q() != model.eta_q())
    throw ConfigError("protocol eta_q must match the model's drive parity");
  const auto slices = count_or(cfg, "slices", 4096, "config");
  if (slices % 8 != 0) throw ConfigError("slices must be divisible by 8");
  const double tol = num_or(cfg, "tolerance", 1e-8, "config");

  std::vector<double> times;
  if (cfg.contains("times")) {
    for (const auto& t : cfg["times"]) times.push_back(t.get<double>());
  } else {
    for (int k = 1; k <= 5; ++k) times.push_back(protocol.tau() * k / 8.0);
  }
  double ratio_lo = 3.5, ratio_hi = 4.5;
  if (cfg.contains("ratio_window")) {
    const auto& w = cfg["ratio_window"];
    if (!w.is_array() || w.size() != 2) throw ConfigError("ratio_window must be [lo, hi]");
    ratio_lo = w[0].get<double>();
    ratio_hi = w[1].get<double>();
  }

  json rows = json::array();
  bool dev_ok = true, ratio_ok = true;
  CsvWriter csv(ctx.path("microrev.csv"), {"t", "deviation", "deviation_half_slices", "ratio"});
  for (double t : times) {
    const double dev = check_quantum_microreversibility(model, protocol, t, slices);
    const double dev_half = check_quantum_microreversibility(model, protocol, t, slices / 2);
    const double ratio = dev > 0.0 ? dev_half / dev : 0.0;
    csv.row({t, dev, dev_half, ratio});
    rows.push_back({{"t", t}, {"deviation", dev}, {"half_slices_ratio", ratio}});
    dev_ok = dev_ok && dev < tol;
    const bool interior = t > 0.0 && t < protocol.tau();
    if (interior && dev > 1e-13) ratio_ok = ratio_ok && ratio >= ratio_lo && ratio <= ratio_hi;
  }

  json checks;
  checks["deviation_below_tolerance"] = dev_ok;
  checks["second_order_convergence"] = ratio_ok;

  json summary;
  summary["experiment"] = "quantum_microrev";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"slices", slices},
                       {"times", times}};
  summary["estimates"] = {{"deviations", rows}};
  summary["tolerances"] = {{"deviation", tol}, {"ratio_window", {ratio_lo, ratio_hi}}};
  summary["checks"] = checks;
  return summary;
}

json run_operator_work_gap(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "protocol", "beta", "slices", "commuting_tol",
                       "min_gap", "seed", "output_dir"},
                 "config");
  (void)ctx;
  const auto model = parse_quantum_model(require_key(cfg, "model", "config"));
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  const double beta = positive_num(cfg, "beta", "config");
  const auto slices = count_or(cfg, "slices", 1024, "config");
  const double commuting_tol = num_or(cfg, "commuting_tol", 1e-10, "config");
  const double min_gap = num_or(cfg, "min_gap", 1e-3, "config");

  const auto res = operator_work_counterexample(model, protocol, beta, slices);
  const bool commuting = model.drive_commutes();
  const bool constant_drive = std::holds_alternative<ConstantShape>(protocol.shape());

  json checks;
  if (commuting || constant_drive)
    checks["gap_vanishes_for_commuting_family"] = res.gap < commuting_tol;
  else
    checks["gap_witnesses_inequivalence"] = res.gap > min_gap;

  json summary;
  summary["experiment"] = "operator_work_gap";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"beta", beta},
                       {"slices", slices}};
  summary["estimates"] = {{"operator_side", res.operator_side},
                          {"partition_ratio", res.ratio_side},
                          {"gap", res.gap},
                          {"commuting_family", commuting || constant_drive}};
  summary["tolerances"] = {{"commuting_gap", commuting_tol}, {"min_gap", min_gap}};
  summary["checks"] = checks;
  return summary;
}

json run_linear_response_fdt(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "observable", "beta", "t_max", "grid_points",
                       "tolerance", "classical_limit", "seed", "output_dir"},
                 "config");
  const auto model = parse_quantum_model(require_key(cfg, "model", "config"));
  const auto b = parse_observable(cfg, model);
  const double beta = positive_num(cfg, "beta", "config");
  const double t_max = num_or(cfg, "t_max", 10.0, "config");
  const auto points = count_or(cfg, "grid_points", 200, "config");
  const double tol = num_or(cfg, "tolerance", 1e-9, "config");

  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);

  const auto resp = response_and_correlation(model, b, beta, grid);
  const double worst = fdt_check(resp);

  {
    CsvWriter csv(ctx.path("response.csv"), {"t", "phi", "psi"});
    for (std::size_t i = 0; i < grid.size(); ++i) csv.row({grid[i], resp.phi[i], resp.psi[i]});
  }

  json terms = json::array();
  for (const auto& t : resp.bohr_terms) {
    terms.push_back({{"omega", t.omega},
                     {"phi_amplitude_re", t.phi_amplitude.real()},
                     {"phi_amplitude_im", t.phi_amplitude.imag()},
                     {"psi_amplitude_re", t.psi_amplitude.real()},
                     {"psi_amplitude_im", t.psi_amplitude.imag()}});
  }

  json checks;
  checks["fdt_within_tolerance"] = worst < tol;

  json summary;
  summary["experiment"] = "linear_response_fdt";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"beta", beta},
                       {"t_max", t_max},
                       {"grid_points", points}};
  summary["estimates"] = {{"max_relative_deviation", worst}, {"bohr_terms", terms}};
  summary["tolerances"] = {{"fdt", tol}};

  if (cfg.contains("classical_limit")) {
    const json& cl = cfg["classical_limit"];
    reject_unknown(cl, {"beta", "omega_beta_max", "rel_tol"}, "classical_limit");
    const double beta_cl = num_or(cl, "beta", 0.01, "classical_limit");
    const double cap = num_or(cl, "omega_beta_max", 0.1, "classical_limit");
    const double rel = num_or(cl, "rel_tol", 0.02, "classical_limit");
    const auto resp_cl = response_and_correlation(model, b, beta_cl, {0.0});
    bool ok = true;
    json ratios = json::array();
    for (const auto& [omega, ratio] : fdt_ratios(resp_cl)) {
      if (std::abs(omega) * beta_cl * model.hbar() >= cap) continue;
      const double rel_dev = std::abs(ratio * beta_cl - 1.0);
      ratios.push_back({{"omega", omega}, {"ratio", ratio}, {"relative_deviation", rel_dev}});
      ok = ok && rel_dev <= rel;
    }
    summary["estimates"]["classical_limit_ratios"] = ratios;
    summary["tolerances"]["classical_limit_rel"] = rel;
    checks["classical_limit_ratio_near_1_over_beta"] = ok;
  }
  summary["checks"] = checks;
  return summary;
}

json run_linear_response_firstorder(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "model", "observable", "protocol", "beta", "slices",
                       "epsilons", "ratio_window", "seed", "output_dir"},
                 "config");
  const auto model = parse_quantum_model(require_key(cfg, "model", "config"));
  const auto b = parse_observable(cfg, model);
  const auto protocol = parse_protocol(require_key(cfg, "protocol", "config"));
  const double beta = positive_num(cfg, "beta", "config");
  const auto slices = count_or(cfg, "slices", 2048, "config");

  std::vector<double> epsilons = {1e-2, 5e-3, 2.5e-3};
  if (cfg.contains("epsilons")) {
    epsilons.clear();
    for (const auto& e : cfg["epsilons"]) epsilons.push_back(e.get<double>());
    if (epsilons.size() < 2) throw ConfigError("epsilons needs at least two values");
  }
  double ratio_lo = 3.5, ratio_hi = 4.5;
  if (cfg.contains("ratio_window")) {
    const auto& w = cfg["ratio_window"];
    if (!w.is_array() || w.size() != 2) throw ConfigError("ratio_window must be [lo, hi]");
    ratio_lo = w[0].get<double>();
    ratio_hi = w[1].get<double>();
  }

  std::vector<double> gaps;
  json per_eps = json::array();
  bool first = true;
  for (double eps : epsilons) {
    const auto pred = linear_response_prediction(model, b, scale_protocol(protocol, eps), beta,
                                                 slices);
    gaps.push_back(pred.max_gap);
    per_eps.push_back({{"epsilon", eps}, {"max_gap", pred.max_gap}});
    if (first) {
      const auto resp = response_and_correlation(model, b, beta, pred.time_grid);
      CsvWriter csv(ctx.path("response.csv"),
                    {"t", "phi", "psi", "predicted_delta_b", "exact_delta_b"});
      for (std::size_t i = 0; i < pred.time_grid.size(); ++i)
        csv.row({pred.time_grid[i], resp.phi[i], resp.psi[i], pred.predicted[i],
                 pred.exact[i]});
      first = false;
    }
  }
  bool ratios_ok = true;
  json ratios = json::array();
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    const double r = gaps[i] / gaps[i + 1];
    ratios.push_back(r);
    // each epsilon halving should shrink the gap by about 4
    const double step = epsilons[i] / epsilons[i + 1];
    const double expected = step * step;
    ratios_ok = ratios_ok && r >= ratio_lo * expected / 4.0 && r <= ratio_hi * expected / 4.0;
  }

  json checks;
  checks["gap_scales_quadratically"] = ratios_ok;

  json summary;
  summary["experiment"] = "linear_response_firstorder";
  summary["inputs"] = {{"model", require_key(cfg, "model", "config")},
                       {"protocol", require_key(cfg, "protocol", "config")},
                       {"beta", beta},
                       {"slices", slices},
                       {"epsilons", epsilons}};
  summary["estimates"] = {{"gaps", per_eps}, {"gap_ratios", ratios}};
  summary["tolerances"] = {{"ratio_window", {ratio_lo, ratio_hi}}};
  summary["checks"] = checks;
  return summary;
}

json run_brownian_einstein(const json& cfg, Ctx& ctx) {
  reject_unknown(cfg, {"experiment", "gamma", "k_b_t", "force", "dt", "n_steps", "n_particles",
                       "closed_form_rel_tol", "ks_alpha", "trap", "seed", "output_dir"},
                 "config");
  BrownianConfig bc;
  bc.gamma = num_or(cfg, "gamma", 1.0, "config");
  bc.k_b_t = num_or(cfg, "k_b_t", 1.0, "config");
  bc.force = num(cfg, "force", "config");
  bc.dt = num_or(cfg, "dt", 1e-3, "config");
  bc.n_steps = count_or(cfg, "n_steps", 10000, "config");
  bc.n_particles = count_or(cfg, "n_particles", 10000, "config");
  bc.seed = ctx.seed;
  const double rel_tol = num_or(cfg, "closed_form_rel_tol", 0.05, "config");
  const double ks_alpha = num_or(cfg, "ks_alpha", 0.01, "config");
  if (bc.force == 0.0)
    throw ConfigError("key \"force\" in config must be nonzero (mobility needs a drift)");
  try {
    bc.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("invalid config: ") + err.what());
  }

  const auto ensemble = simulate_overdamped(bc, 201, ctx.threads);
  const auto mobility = estimate_mobility(ensemble, bc.force);
  const auto diffusion = estimate_diffusion(ensemble);
  const auto einstein = einstein_check(mobility, diffusion, bc.k_b_t);

  {
    CsvWriter csv(ctx.path("brownian.csv"), {"t", "mean_displacement", "msd"});
    const auto md = ensemble.mean_displacement();
    const auto ms = ensemble.msd();
    for (std::size_t j = 0; j < ensemble.record_times.size(); ++j)
      csv.row({ensemble.record_times[j], md[j], ms[j]});
  }

  const double mu_exact = 1.0 / bc.gamma;
  const double d_exact = bc.k_b_t / bc.gamma;

  json checks;
  checks["einstein_within_3se"] = einstein.pass;
  checks["mobility_matches_closed_form"] =
      std::abs(mobility.value - mu_exact) <= rel_tol * mu_exact;
  checks["diffusion_matches_closed_form"] =
      std::abs(diffusion.value - d_exact) <= rel_tol * d_exact;

  json summary;
  summary["experiment"] = "brownian_einstein";
  summary["inputs"] = {{"gamma", bc.gamma},      {"k_b_t", bc.k_b_t},
                       {"force", bc.force},      {"dt", bc.dt},
                       {"n_steps", bc.n_steps},  {"n_particles", bc.n_particles}};
  summary["estimates"] = {
      {"mobility", estimate_json(mobility.value, mobility.standard_error)},
      {"diffusion", estimate_json(diffusion.value, diffusion.standard_error)},
      {"gap", einstein.gap},
      {"combined_se", einstein.combined_se},
      {"mobility_closed_form", mu_exact},
      {"diffusion_closed_form", d_exact}};
  summary["tolerances"] = {{"sigma_window", 3.0},
                           {"closed_form_rel_tol", rel_tol},
                           {"ks_alpha", ks_alpha}};

  if (cfg.contains("trap")) {
    const json& trap = cfg["trap"];
    reject_unknown(trap, {"stiffness", "dt", "n_steps", "n_particles"}, "trap");
    BrownianConfig tc = bc;
    const double stiffness = num(trap, "stiffness", "trap");
    tc.dt = num_or(trap, "dt", bc.dt, "trap");
    tc.n_steps = count_or(trap, "n_steps", static_cast<std::int64_t>(bc.n_steps), "trap");
    tc.n_particles = count_or(trap, "n_particles", static_cast<std::int64_t>(bc.n_particles), "trap");
    tc.force = 0.0;
    tc.seed = splitmix64(ctx.seed ^ 0x7a9bULL);
    const auto positions = sample_trap_positions(tc, stiffness, ctx.threads);
    const double sigma = std::sqrt(tc.k_b_t / stiffness);
    const double stat =
        ks_statistic(positions, [sigma](double x) { return normal_cdf(x, 0.0, sigma); });
    const double pval = ks_pvalue(stat, positions.size());
    summary["estimates"]["trap_ks_statistic"] = stat;
    summary["estimates"]["trap_ks_pvalue"] = pval;
    checks["stationary_density_ks"] = pval >= ks_alpha;
  }
  summary["checks"] = checks;
  return summary;
}

}  // namespace

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> table = {
      {"classical_jarzynski", "Jarzynski equality",
       "exp(-beta W) averaged over driven Hamiltonian trajectories against exp(-beta dF)",
       {"model", "protocol", "beta", "n_trajectories"}},
      {"classical_crooks", "Crooks fluctuation theorem",
       "log-ratio regression of forward/reverse work histograms",
       {"model", "protocol", "beta", "n_trajectories"}},
      {"classical_microrev", "microreversibility of the driven flow",
       "forward states against momentum-reversed reverse evolution",
       {"model", "protocol"}},
      {"generalized_jarzynski", "generalized Jarzynski identity",
       "path-functional weights on forward versus reverse ensembles",
       {"model", "protocol", "beta", "n_trajectories"}},
      {"quantum_tpm", "two-point-measurement work statistics",
       "projective energy measurements around the driven propagator",
       {"model", "protocol", "beta"}},
      {"quantum_crooks", "quantum Crooks fluctuation theorem",
       "forward/reverse two-point work distributions, exponentially tilted",
       {"model", "protocol", "beta"}},
      {"quantum_microrev", "quantum microreversibility",
       "driven propagator against conjugated reverse propagator",
       {"model", "protocol"}},
      {"operator_work_gap", "operator-difference work inequivalence",
       "tr(rho exp(-beta W_op)) versus the partition ratio",
       {"model", "protocol", "beta"}},
      {"linear_response_fdt", "fluctuation-dissipation theorem",
       "per-frequency link between response and symmetrized correlation",
       {"model", "beta"}},
      {"linear_response_firstorder", "first-order response",
       "convolution prediction against exact driven evolution",
       {"model", "protocol", "beta"}},
      {"brownian_einstein", "Einstein relation",
       "drift mobility against diffusion over temperature",
       {"force"}},
  };
  return table;
}

RunResult run_experiment(const json& config, const RunOptions& options) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  const std::string experiment = text(config, "experiment", "config");

  Ctx ctx;
  ctx.seed = options.seed.value_or(
      static_cast<std::uint64_t>(integer_or(config, "seed", 12345, "config")));
  ctx.threads = options.threads;
  if (options.output_dir) {
    ctx.dir = *options.output_dir;
  } else if (config.contains("output_dir")) {
    ctx.dir = text(config, "output_dir", "config");
  } else if (const char* env = std::getenv("FLUCTUANT_OUT")) {
    ctx.dir = env;
  } else {
    ctx.dir = ".";
  }
  fs::create_directories(ctx.dir);

  json summary;
  if (experiment == "classical_jarzynski")
    summary = run_classical_jarzynski(config, ctx);
  else if (experiment == "classical_crooks")
    summary = run_classical_crooks(config, ctx);
  else if (experiment == "classical_microrev")
    summary = run_classical_microrev(config, ctx);
  else if (experiment == "generalized_jarzynski")
    summary = run_generalized_jarzynski(config, ctx);
  else if (experiment == "quantum_tpm")
    summary = run_quantum_tpm(config, ctx);
  else if (experiment == "quantum_crooks")
    summary = run_quantum_crooks(config, ctx);
  else if (experiment == "quantum_microrev")
    summary = run_quantum_microrev(config, ctx);
  else if (experiment == "operator_work_gap")
    summary = run_operator_work_gap(config, ctx);
  else if (experiment == "linear_response_fdt")
    summary = run_linear_response_fdt(config, ctx);
  else if (experiment == "linear_response_firstorder")
    summary = run_linear_response_firstorder(config, ctx);
  else if (experiment == "brownian_einstein")
    summary = run_brownian_einstein(config, ctx);
  else
    throw ConfigError("unknown experiment \"" + experiment + "\"");

  RunResult result;
  result.pass = all_true(summary["checks"]);
  summary["pass"] = result.pass;
  summary["seed"] = ctx.seed;
  write_summary(ctx.dir, summary);
  ctx.files.push_back("summary.json");

  result.summary = std::move(summary);
  result.output_dir = ctx.dir;
  result.files_written = std::move(ctx.files);
  return result;
}

}  // namespace fluctuant
