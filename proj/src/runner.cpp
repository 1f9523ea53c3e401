#include "fgeo/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fgeo/csv.hpp"
#include "fgeo/instances.hpp"
#include "fgeo/models.hpp"
#include "fgeo/ode.hpp"

namespace fgeo {

namespace {

enum class LogLevel { off = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("FRECHET_GEO_LOG");
  if (!env) return LogLevel::off;
  std::string v(env);
  if (v == "debug") return LogLevel::debug;
  if (v == "info") return LogLevel::info;
  return LogLevel::off;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[fgeo] " << msg << "\n";
}

Vec vec_from(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size()));
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

ChristoffelField christoffel_for_model(const RunConfig& cfg, int dim_hint) {
  if (cfg.model == "flat") {
    int dim = static_cast<int>(cfg.raw.get_int("dim", dim_hint));
    return flat_christoffel(dim);
  }
  if (cfg.model == "matrix-group") {
    MatrixGroupModel mg{static_cast<int>(cfg.raw.get_int("n", 2))};
    return direct_christoffel(mg);
  }
  if (cfg.model == "custom-polynomial")
    return polynomial_christoffel_from_config(cfg.raw, "gamma");
  throw ConfigError("model `" + cfg.model + "` has no Christoffel field (line " +
                    std::to_string(cfg.raw.line_of("model")) + ")");
}

void reject_unknown_keys(const RunConfig& cfg) {
  auto leftover = cfg.raw.unconsumed();
  if (leftover.empty()) return;
  std::string msg = "unknown key(s):";
  for (const auto& k : leftover)
    msg += " `" + k + "` (line " + std::to_string(cfg.raw.line_of(k)) + ")";
  throw ConfigError(msg);
}

RunResult run_geodesic(const RunConfig& cfg) {
  Vec x0 = vec_from(cfg.raw.get_numbers("x0"));
  Vec y0 = vec_from(cfg.raw.get_numbers("y0"));
  ChristoffelField gamma = christoffel_for_model(cfg, static_cast<int>(x0.size()));
  if (x0.size() != gamma.dim || y0.size() != gamma.dim)
    throw ConfigError("x0/y0 length does not match the model dimension");

  SecondOrderRHS rhs;
  rhs.dim = gamma.dim;
  rhs.phi = [&gamma](double, const Vec& x, const Vec& y) { return gamma(x, y, y); };
  rhs.lipschitz_k = cfg.raw.get_double("lipschitz_k", 1.0);
  double tau = cfg.raw.get_double("tau", 1.0);
  std::vector<std::function<double(const Vec&)>> norms = {
      [](const Vec& v) { return v.norm(); }};
  double a = existence_interval(rhs, 0.0, x0, y0, tau, norms);
  reject_unknown_keys(cfg);

  log_info("integrating geodesic, dim=" + std::to_string(gamma.dim));
  Trajectory traj = geodesic(gamma, x0, y0, cfg.t_end, static_cast<int>(cfg.steps));
  write_trajectory_csv(out_path(cfg, "geodesic.csv"), traj);

  RunResult result;
  result.summary = {
      {"subcommand", "geodesic"},
      {"model", cfg.model},
      {"existence_interval_a", format_double(a)},
      {"final_position_norm", format_double(traj.pos.back().norm())},
  };
  return result;
}

RunResult run_transport(const RunConfig& cfg) {
  Vec u0 = vec_from(cfg.raw.get_numbers("u0"));
  ChristoffelField gamma = christoffel_for_model(cfg, static_cast<int>(u0.size()));
  Vec p0 = vec_from(cfg.raw.get_numbers("curve.p0"));
  Vec cv = vec_from(cfg.raw.get_numbers("curve.v"));
  if (p0.size() != gamma.dim || cv.size() != gamma.dim || u0.size() != gamma.dim)
    throw ConfigError("curve/u0 length does not match the model dimension");
  reject_unknown_keys(cfg);

  Curve c;
  c.pos = [p0, cv](double t) -> Vec { return p0 + t * cv; };
  c.vel = [cv](double) -> Vec { return cv; };
  Trajectory traj =
      parallel_transport(gamma, c, u0, 0.0, cfg.t_end, static_cast<int>(cfg.steps));
  write_trajectory_csv(out_path(cfg, "transport.csv"), traj);

  RunResult result;
  result.summary = {
      {"subcommand", "transport"},
      {"model", cfg.model},
      {"final_vector_norm", format_double(traj.pos.back().norm())},
  };
  return result;
}

RunResult run_convert_check(const RunConfig& cfg) {
  const int cases = static_cast<int>(cfg.raw.get_int("cases", 50));
  const double hessian_tol = cfg.tol_set ? cfg.tol : 1e-5;
  const double roundtrip_tol = 1e-12;
  reject_unknown_keys(cfg);

  Rng rng(cfg.seed);
  double hessian_res = 0.0, spray_res = 0.0, dissection_res = 0.0;
  for (int c = 0; c < cases; ++c) {
    const int dim = 1 + c % 4;
    ChristoffelField gamma = random_polynomial_christoffel(rng, dim, true);
    ScalarField f = random_polynomial_scalar_field(rng, dim);
    VectorField x = random_polynomial_vector_field(rng, dim);
    VectorField y = random_polynomial_vector_field(rng, dim);
    Vec u = random_vec(rng, dim);

    double h1 = hessian_apply(gamma, f, x, y, u);
    double h2 = hessian_via_connection(gamma, f, x, y, u);
    hessian_res = std::max(hessian_res, std::abs(h1 - h2) / (1.0 + std::abs(h1)));

    auto quadratic = [&gamma](const Vec& p, const Vec& v) {
      return spray_eval(gamma, p, v).second;
    };
    ChristoffelField from_spray = christoffel_from_spray(quadratic, dim);
    auto dissection = [&gamma](const Vec& alpha, const Vec& p) {
      return dissection_eval(gamma, alpha, p);
    };
    ChristoffelField from_jet = christoffel_from_dissection(dissection, dim);
    for (int p = 0; p < 4; ++p) {
      Vec pu = random_vec(rng, dim), v = random_vec(rng, dim), w = random_vec(rng, dim);
      Vec ref = gamma(pu, v, w);
      spray_res = std::max(spray_res, (from_spray(pu, v, w) - ref).norm());
      dissection_res = std::max(dissection_res, (from_jet(pu, v, w) - ref).norm());
    }
  }

  bool pass = hessian_res <= hessian_tol && spray_res <= roundtrip_tol &&
              dissection_res <= roundtrip_tol;
  RunResult result;
  result.exit_code = pass ? 0 : 1;
  result.summary = {
      {"subcommand", "convert-check"},
      {"cases", std::to_string(cases)},
      {"hessian_equivalence_max_residual", format_double(hessian_res)},
      {"spray_roundtrip_max_residual", format_double(spray_res)},
      {"dissection_roundtrip_max_residual", format_double(dissection_res)},
      {"pass", pass ? "true" : "false"},
  };
  return result;
}

RunResult run_tower_check(const RunConfig& cfg) {
  Tower tower = tower_from_config(cfg.raw);
  const double tol = cfg.tol_set ? cfg.tol : 1e-12;
  reject_unknown_keys(cfg);

  CoherenceReport report = check_composition_coherence(tower, tol);
  std::vector<LevelResidual> rows;
  for (const CoherenceEntry& e : report.entries)
    rows.push_back({0.0, e.k, e.i, e.residual});
  write_residuals_csv(out_path(cfg, "tower_coherence.csv"), rows);

  // Projection linearity probe on seeded random data.
  Rng rng(cfg.seed);
  double lin_res = 0.0;
  const int top = tower.depth() - 1;
  for (int p = 0; p < 16; ++p) {
    Vec x = random_vec(rng, tower.level(top).dim);
    Vec y = random_vec(rng, tower.level(top).dim);
    double al = random_vec(rng, 1)[0], be = random_vec(rng, 1)[0];
    for (int i = 0; i <= top; ++i) {
      Vec lhs = tower.project(al * x + be * y, top, i);
      Vec rhs = al * tower.project(x, top, i) + be * tower.project(y, top, i);
      lin_res = std::max(lin_res, (lhs - rhs).norm());
    }
  }

  bool pass = report.pass && lin_res <= tol;
  RunResult result;
  result.exit_code = pass ? 0 : 1;
  result.summary = {
      {"subcommand", "tower-check"},
      {"levels", std::to_string(tower.depth())},
      {"coherence_max_residual", format_double(report.max_residual)},
      {"projection_linearity_max_residual", format_double(lin_res)},
      {"pass", pass ? "true" : "false"},
  };
  return result;
}

RunResult run_ch(const RunConfig& cfg) {
  ChModel model;
  model.k = static_cast<int>(cfg.raw.get_int("ch.k", 1));
  model.modes = static_cast<int>(cfg.raw.get_int("ch.modes", 128));
  model.sobolev_n = static_cast<int>(cfg.raw.get_int("ch.sobolev_n", 1));
  if (model.k < 0) throw ConfigError("`ch.k` must be >= 0");
  if (model.modes < 1) throw ConfigError("`ch.modes` must be >= 1");

  SpectralState u0 = SpectralState::zero(model.modes);
  if (cfg.raw.has("ch.init_samples")) {
    Vec samples = vec_from(cfg.raw.get_numbers("ch.init_samples"));
    u0 = state_from_samples(samples, model.modes);
  } else {
    std::vector<double> init = cfg.raw.get_numbers("ch.init");
    if (static_cast<int>(init.size()) > 2 * model.modes + 1)
      throw ConfigError("`ch.init` has more coefficients than 2*modes+1");
    for (size_t i = 0; i < init.size(); ++i) u0.coeffs[i] = init[i];
  }
  const double drift_tol = cfg.tol_set ? cfg.tol : 1e-6;
  reject_unknown_keys(cfg);

  log_info("integrating spectral model, modes=" + std::to_string(model.modes));
  auto [times, states] = ch_solve(model, u0, cfg.t_end, static_cast<int>(cfg.steps));
  write_spectral_csv(out_path(cfg, "ch.csv"), times, states, model.k);

  const double e0 = ch_energy(u0, model.k);
  double drift = 0.0;
  for (const SpectralState& s : states)
    drift = std::max(drift, std::abs(ch_energy(s, model.k) - e0));
  double rel_drift = e0 > 0.0 ? drift / e0 : drift;

  bool pass = rel_drift <= drift_tol;
  RunResult result;
  result.exit_code = pass ? 0 : 1;
  result.summary = {
      {"subcommand", "ch"},
      {"modes", std::to_string(model.modes)},
      {"k", std::to_string(model.k)},
      {"initial_sobolev_seminorm",
       format_double(sobolev_seminorm(u0, model.sobolev_n))},
      {"energy_initial", format_double(e0)},
      {"energy_relative_drift", format_double(rel_drift)},
      {"pass", pass ? "true" : "false"},
  };
  return result;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult result;
  if (cfg.subcommand == "geodesic")
    result = run_geodesic(cfg);
  else if (cfg.subcommand == "transport")
    result = run_transport(cfg);
  else if (cfg.subcommand == "convert-check")
    result = run_convert_check(cfg);
  else if (cfg.subcommand == "tower-check")
    result = run_tower_check(cfg);
  else if (cfg.subcommand == "ch")
    result = run_ch(cfg);
  else
    throw ConfigError("unknown subcommand `" + cfg.subcommand + "`");
  write_summary(out_path(cfg, "summary.txt"), result.summary);
  return result;
}

int run_from_text(const std::string& config_text, const std::string& subcommand,
                  const CliOverrides& overrides) {
  try {
    RunConfig cfg = parse_run_config(config_text, subcommand);
    if (overrides.out) cfg.out_dir = *overrides.out;
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.tol) { cfg.tol = *overrides.tol; cfg.tol_set = true; }
    RunResult result = run(cfg);
    for (const auto& [key, value] : result.summary)
      std::cout << key << " = " << value << "\n";
    return result.exit_code;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace fgeo
