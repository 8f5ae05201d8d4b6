#pragma once

// Command-line front end: scenario parsing, run orchestration and data
// emission for external plotting.
//
//   vortexlab simulate    --config cfg.json [--out dir] [--t-end T] [--tol x]
//   vortexlab orbit-check --config cfg.json --trajectory traj.csv [--tol x]
//     (--tol here bounds the orbit-equation residual)
//   vortexlab poincare    --config cfg.json [--out dir] [--t-end T] [--tol x]
//   vortexlab sweep       --config cfg.json [--out dir] [--jobs n]
//   vortexlab oracle      [--samples n] [--seed n]
//
// Exit codes: 0 success, 1 check failed, 2 validation/schema, 3 integration
// failure, 4 I/O, 5 run stopped early by a terminal event.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "vortexlab/scenario.hpp"

namespace vortexlab {

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  if (!f) fail(errc::io_error, "cannot read " + p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline int validation_exit(const error& e) {
  std::fprintf(stderr, "%s\n", e.what());
  return e.code() == errc::io_error ? exit_io : exit_validation;
}

struct cli_overrides {
  std::optional<double> t_end;
  std::optional<double> rel_tol;

  void apply(scenario_config& cfg) const {
    if (t_end) cfg.integrator.t_end = *t_end;
    if (rel_tol) cfg.integrator.rel_tol = *rel_tol;
  }
};

}  // namespace detail

inline int cmd_simulate(const std::string& config_text,
                        const std::filesystem::path& out_dir,
                        const detail::cli_overrides& ovr = {}) {
  scenario_config cfg;
  try {
    cfg = parse_config(config_text);
    ovr.apply(cfg);
    validate_settings(cfg.integrator);
  } catch (const error& e) {
    return detail::validation_exit(e);
  }
  try {
    const run_result res = run_scenario(cfg, out_dir);
    std::printf("status=%s samples=%zu events=%zu\n",
                run_status_name(res.traj.status), res.traj.samples(),
                res.traj.events.size());
    for (const auto& f : res.files) std::printf("wrote %s\n", f.c_str());
    return res.exit_code;
  } catch (const error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return e.code() == errc::io_error ? exit_io : exit_integration;
  }
}

/// Evaluates the reduced orbit equation (half-plane pair), the dipole orbit
/// equation, or the quadrant trajectory constant along an existing
/// trajectory CSV; prints the maximum relative residual.
inline int cmd_orbit_check(const std::string& config_text,
                           const std::filesystem::path& traj_csv, double tol) {
  scenario_config cfg;
  csv_table table;
  try {
    cfg = parse_config(config_text);
    table = read_csv(traj_csv);
  } catch (const error& e) {
    return detail::validation_exit(e);
  }
  if (table.rows.empty()) {
    std::fprintf(stderr, "trajectory has no rows\n");
    return exit_validation;
  }

  double max_rel = 0.0;
  try {
    if (cfg.model == model_kind::quadrant) {
      const double c0 = trajectory_constant(table.rows.front()[1],
                                            table.rows.front()[2]);
      for (const auto& row : table.rows)
        max_rel = std::max(
            max_rel, std::abs(trajectory_constant(row[1], row[2]) - c0) / c0);
    } else if (cfg.model == model_kind::half_plane &&
               cfg.system.size() == 2) {
      auto system_at = [&](const std::vector<double>& row) {
        vortex_system s = cfg.system;
        s.positions = {{row[1], row[2]}, {row[3], row[4]}};
        return s;
      };
      const vortex_system first = system_at(table.rows.front());
      if (cfg.system.strengths[0] + cfg.system.strengths[1] == 0.0) {
        const auto p = dipole_orbit_params::from_system(first);
        for (const auto& row : table.rows) {
          const double x_r = row[1] - row[3];
          const double y0 = 0.5 * (row[2] + row[4]);
          max_rel = std::max(
              max_rel, std::abs(orbit_residual_dipole(x_r, y0, p)) / p.level);
        }
      } else {
        const auto p = generic_orbit_params::from_system(first);
        for (const auto& row : table.rows) {
          const double x_r = row[1] - row[3];
          const double y_r = row[2] - row[4];
          max_rel = std::max(
              max_rel, std::abs(orbit_residual_generic(x_r, y_r, p)) / p.level);
        }
      }
    } else {
      std::fprintf(stderr,
                   "orbit-check supports half-plane pairs and the quadrant\n");
      return exit_validation;
    }
  } catch (const error& e) {
    return detail::validation_exit(e);
  }
  std::printf("max relative residual = %.6e (tolerance %.1e)\n", max_rel, tol);
  return max_rel < tol ? exit_ok : exit_check_failed;
}

/// Generates stroboscopic sections, one CSV per requested epsilon.
inline int cmd_poincare(const std::string& config_text,
                        const std::filesystem::path& out_dir,
                        const detail::cli_overrides& ovr = {}) {
  scenario_config cfg;
  try {
    cfg = parse_config(config_text);
    ovr.apply(cfg);
    if (cfg.model != model_kind::restricted3)
      fail(errc::validation_error, "poincare needs the restricted3 model");
  } catch (const error& e) {
    return detail::validation_exit(e);
  }

  std::vector<double> epsilons = cfg.poincare.epsilons;
  if (epsilons.empty()) epsilons.push_back(cfg.restricted3.epsilon);
  try {
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      restricted3_state st = cfg.restricted3;
      st.epsilon = epsilons[i];
      const auto sec =
          poincare_section(st, cfg.poincare.n_periods, cfg.integrator);
      std::string name = cfg.outputs.section_csv;
      if (epsilons.size() > 1)
        name = suffixed_filename(name, "_" + std::to_string(i));
      write_section_csv(out_dir / name, sec);
      std::printf("epsilon=%g points=%zu status=%s wrote %s\n", epsilons[i],
                  sec.points.size(), section_status_name(sec.status),
                  (out_dir / name).string().c_str());
    }
  } catch (const error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return e.code() == errc::io_error ? exit_io : exit_integration;
  }
  return exit_ok;
}

/// Fans independent runs over a grid of values substituted at a JSON pointer
/// in the config; each run writes its own suffixed output files.
inline int cmd_sweep(const std::string& config_text,
                     const std::filesystem::path& out_dir,
                     unsigned jobs = std::thread::hardware_concurrency()) {
  json base;
  sweep_options sw;
  try {
    const scenario_config cfg = parse_config(config_text);
    if (!cfg.sweep)
      fail(errc::validation_error, "config has no sweep section");
    sw = *cfg.sweep;
    base = json::parse(config_text);
  } catch (const error& e) {
    return detail::validation_exit(e);
  } catch (const json::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return exit_validation;
  }

  if (jobs == 0) jobs = 1;
  std::mutex io_mutex;
  auto run_one = [&](std::size_t idx) -> int {
    json doc = base;
    try {
      doc[json::json_pointer(sw.pointer)] = sw.values[idx];
      scenario_config cfg = config_from_json(doc);
      cfg.sweep.reset();
      char tag[16];
      std::snprintf(tag, sizeof(tag), "_%03zu", idx);
      cfg.outputs.trajectory_csv = suffixed_filename(cfg.outputs.trajectory_csv, tag);
      cfg.outputs.drift_json = suffixed_filename(cfg.outputs.drift_json, tag);
      cfg.outputs.events_jsonl = suffixed_filename(cfg.outputs.events_jsonl, tag);
      cfg.outputs.section_csv = suffixed_filename(cfg.outputs.section_csv, tag);
      int code = exit_ok;
      if (sw.command == "poincare") {
        restricted3_state st = cfg.restricted3;
        const auto sec =
            poincare_section(st, cfg.poincare.n_periods, cfg.integrator);
        write_section_csv(out_dir / cfg.outputs.section_csv, sec);
      } else {
        code = run_scenario(cfg, out_dir).exit_code;
      }
      std::lock_guard<std::mutex> lock(io_mutex);
      std::printf("sweep[%zu] %s=%.17g exit=%d\n", idx, sw.pointer.c_str(),
                  sw.values[idx], code);
      return code;
    } catch (const error& e) {
      std::lock_guard<std::mutex> lock(io_mutex);
      std::fprintf(stderr, "sweep[%zu]: %s\n", idx, e.what());
      return e.code() == errc::io_error ? exit_io : exit_validation;
    } catch (const json::exception& e) {
      std::lock_guard<std::mutex> lock(io_mutex);
      std::fprintf(stderr, "sweep[%zu]: %s\n", idx, e.what());
      return exit_validation;
    }
  };

  int worst = exit_ok;
  for (std::size_t begin = 0; begin < sw.values.size(); begin += jobs) {
    const std::size_t end = std::min(begin + jobs, sw.values.size());
    std::vector<std::future<int>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, run_one, i));
    for (auto& f : batch) worst = std::max(worst, f.get());
  }
  return worst;
}

/// Quadrature-vs-elliptic Green function comparison suite plus a
/// finite-difference gradient check on seeded random ring pairs.
inline int cmd_oracle(std::size_t samples, unsigned long long seed,
                      double pair_tol = 1e-9, double grad_tol = 1e-6,
                      std::size_t grad_samples = 100) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.1, 10.0);
  std::uniform_real_distribution<double> axial(-5.0, 5.0);

  double max_pair = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = radius(rng), rp = radius(rng);
    const double z = axial(rng), zp = axial(rng);
    if (std::hypot(z - zp, r - rp) < 1e-6) continue;
    const double gq = green_ring(z, r, zp, rp);
    const double gf = green_ring_fast(z, r, zp, rp);
    max_pair = std::max(max_pair, std::abs(gf - gq) / std::max(std::abs(gq), 1e-300));
  }

  double max_grad = 0.0;
  for (std::size_t i = 0; i < grad_samples; ++i) {
    const double r = radius(rng), rp = radius(rng);
    const double z = axial(rng), zp = axial(rng);
    if (std::hypot(z - zp, r - rp) < 1e-2) continue;
    const auto g = green_ring_grad(z, r, zp, rp, 1e-14);
    const double hz = 1e-5 * std::max(1.0, std::abs(z));
    const double hr = 1e-5 * std::max(1.0, std::abs(r));
    const double fd_z =
        (green_ring(z + hz, r, zp, rp, 1e-14) - green_ring(z - hz, r, zp, rp, 1e-14)) /
        (2.0 * hz);
    const double fd_r =
        (green_ring(z, r + hr, zp, rp, 1e-14) - green_ring(z, r - hr, zp, rp, 1e-14)) /
        (2.0 * hr);
    const double scale = std::max({std::abs(g.dz), std::abs(g.dr), 1e-12});
    max_grad = std::max(max_grad, std::abs(g.dz - fd_z) / scale);
    max_grad = std::max(max_grad, std::abs(g.dr - fd_r) / scale);
  }

  std::printf("green function: fast vs quadrature max rel diff = %.3e (tol %.1e)\n",
              max_pair, pair_tol);
  std::printf("green gradient: analytic vs finite differences = %.3e (tol %.1e)\n",
              max_grad, grad_tol);
  return (max_pair < pair_tol && max_grad < grad_tol) ? exit_ok
                                                      : exit_check_failed;
}

/// Full argv-level entry point; returns the process exit code.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"vortexlab: a numerical laboratory for point vortices, coaxial vortex rings and sphere-product membranes"};
  app.require_subcommand(1);

  std::string config_path, trajectory_path, out_dir = ".";
  double t_end = std::numeric_limits<double>::quiet_NaN();
  double tol = std::numeric_limits<double>::quiet_NaN();
  unsigned long long seed = 0;
  std::size_t samples = 10000;
  unsigned jobs = std::thread::hardware_concurrency();
  double check_tol = 1e-6;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    if (needs_config)
      sub->add_option("--config", config_path, "scenario JSON")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--t-end", t_end, "override integration horizon");
    sub->add_option("--tol", tol, "override relative tolerance");
  };

  auto* sim = app.add_subcommand("simulate", "integrate a scenario");
  add_common(sim);
  auto* check = app.add_subcommand("orbit-check",
                                   "evaluate orbit-equation residuals along a trajectory file");
  check->add_option("--config", config_path, "scenario JSON")->required();
  check->add_option("--trajectory", trajectory_path, "trajectory CSV")->required();
  check->add_option("--tol", check_tol, "residual tolerance");
  auto* poin = app.add_subcommand("poincare", "stroboscopic sections with epsilon sweep");
  add_common(poin);
  auto* sweep = app.add_subcommand("sweep", "grid over one config parameter, parallel");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "parallel workers");
  auto* oracle = app.add_subcommand("oracle",
                                    "Green-function quadrature vs elliptic comparison suite");
  oracle->add_option("--samples", samples, "number of random pairs");
  oracle->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }

  detail::cli_overrides ovr;
  if (!std::isnan(t_end)) ovr.t_end = t_end;
  if (!std::isnan(tol)) ovr.rel_tol = tol;

  try {
    if (app.got_subcommand(oracle)) return cmd_oracle(samples, seed);
    const std::string text = detail::read_file(config_path);
    if (app.got_subcommand(sim)) return cmd_simulate(text, out_dir, ovr);
    if (app.got_subcommand(check))
      return cmd_orbit_check(text, trajectory_path, check_tol);
    if (app.got_subcommand(poin)) return cmd_poincare(text, out_dir, ovr);
    if (app.got_subcommand(sweep)) return cmd_sweep(text, out_dir, jobs);
  } catch (const error& e) {
    return detail::validation_exit(e);
  }
  std::fprintf(stderr, "unknown subcommand\n");
  return exit_validation;
}

}  // namespace vortexlab
