#pragma once

// Declarative scenario configs (one JSON schema for all five models), their
// parsing/serialization, and run orchestration with file outputs:
// trajectory CSV, invariant-drift report JSON, and an event log in JSON
// Lines. Numbers in CSVs carry 17 significant digits so a reload is
// bit-faithful.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortexlab/core.hpp"
#include "vortexlab/diagnostics.hpp"
#include "vortexlab/integrate.hpp"
#include "vortexlab/models.hpp"

namespace vortexlab {

using nlohmann::json;

// exit codes of run_scenario and the CLI
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_validation = 2;
inline constexpr int exit_integration = 3;
inline constexpr int exit_io = 4;
inline constexpr int exit_event_stop = 5;

struct output_paths {
  std::string trajectory_csv = "trajectory.csv";
  std::string drift_json = "drift.json";
  std::string events_jsonl = "events.jsonl";
  std::string section_csv = "section.csv";

  friend bool operator==(const output_paths&, const output_paths&) = default;
};

struct poincare_options {
  std::size_t n_periods = 100;
  std::vector<double> epsilons;  ///< empty: use restricted3.epsilon alone

  friend bool operator==(const poincare_options&, const poincare_options&) = default;
};

struct sweep_options {
  std::string pointer;  ///< JSON pointer into the config, e.g. "/restricted3/epsilon"
  std::vector<double> values;
  std::string command = "simulate";  ///< "simulate" or "poincare"

  friend bool operator==(const sweep_options&, const sweep_options&) = default;
};

struct scenario_config {
  model_kind model = model_kind::plane;
  vortex_system system;  // plane / half_plane / quadrant
  half_plane_normalization normalization = half_plane_normalization::eq9;
  ring_system rings;
  sphere_product_state membrane;
  restricted3_state restricted3;
  integrator_settings integrator;
  poincare_options poincare;
  std::optional<sweep_options> sweep;
  output_paths outputs;

  friend bool operator==(const scenario_config&, const scenario_config&) = default;
};

// ---------------------------------------------------------------------------
// JSON <-> config

namespace detail {

inline model_kind model_from_string(const std::string& s) {
  if (s == "plane") return model_kind::plane;
  if (s == "half_plane") return model_kind::half_plane;
  if (s == "quadrant") return model_kind::quadrant;
  if (s == "rings") return model_kind::rings;
  if (s == "membrane") return model_kind::membrane;
  if (s == "restricted3") return model_kind::restricted3;
  fail(errc::schema_error, "unknown model '" + s + "'");
}

inline double require_positive(const json& j, const char* field) {
  const double v = j.at(field).get<double>();
  if (!(v > 0.0))
    fail(errc::schema_error, std::string(field) + " must be positive");
  return v;
}

template <class T>
void read_if(const json& j, const char* field, T& out) {
  if (j.contains(field)) out = j.at(field).get<T>();
}

}  // namespace detail

inline json config_to_json(const scenario_config& c) {
  json j;
  j["model"] = model_name(c.model);
  switch (c.model) {
    case model_kind::plane:
    case model_kind::half_plane:
    case model_kind::quadrant: {
      j["strengths"] = c.system.strengths;
      json pos = json::array();
      for (const vec2& p : c.system.positions) pos.push_back({p.x, p.y});
      j["positions"] = pos;
      if (!c.system.tracer.empty()) j["tracers"] = c.system.tracer;
      if (c.model == model_kind::half_plane)
        j["halfplane_normalization"] =
            c.normalization == half_plane_normalization::eq9 ? "eq9" : "greens";
      break;
    }
    case model_kind::rings: {
      json rings = json::array();
      for (const ring& q : c.rings.rings)
        rings.push_back({{"z", q.z}, {"r", q.r}, {"gamma", q.gamma}, {"core", q.core}});
      j["rings"] = rings;
      break;
    }
    case model_kind::membrane:
      j["membrane"] = {{"a", c.membrane.a}, {"b", c.membrane.b},
                       {"m", c.membrane.m}, {"l", c.membrane.l}};
      break;
    case model_kind::restricted3:
      j["restricted3"] = {{"x", c.restricted3.x}, {"y", c.restricted3.y},
                          {"epsilon", c.restricted3.epsilon},
                          {"omega0", c.restricted3.omega0}};
      break;
  }
  j["integrator"] = {{"rel_tol", c.integrator.rel_tol},
                     {"abs_tol", c.integrator.abs_tol},
                     {"max_step", c.integrator.max_step},
                     {"min_step", c.integrator.min_step},
                     {"t_end", c.integrator.t_end},
                     {"sample_dt", c.integrator.sample_dt},
                     {"drift_tol", c.integrator.drift_tol}};
  j["events"] = {{"close_approach", c.integrator.close_approach},
                 {"boundary", c.integrator.boundary},
                 {"collapse_radius", c.integrator.collapse_radius},
                 {"escape_radius", c.integrator.escape_radius}};
  j["poincare"] = {{"n_periods", c.poincare.n_periods},
                   {"epsilons", c.poincare.epsilons}};
  if (c.sweep)
    j["sweep"] = {{"pointer", c.sweep->pointer}, {"values", c.sweep->values},
                  {"command", c.sweep->command}};
  j["outputs"] = {{"trajectory_csv", c.outputs.trajectory_csv},
                  {"drift_json", c.outputs.drift_json},
                  {"events_jsonl", c.outputs.events_jsonl},
                  {"section_csv", c.outputs.section_csv}};
  return j;
}

inline scenario_config config_from_json(const json& j) {
  scenario_config c;
  try {
    c.model = detail::model_from_string(j.at("model").get<std::string>());
    switch (c.model) {
      case model_kind::plane:
      case model_kind::half_plane:
      case model_kind::quadrant: {
        c.system.domain = c.model == model_kind::plane ? domain_kind::plane
                          : c.model == model_kind::half_plane
                              ? domain_kind::half_plane
                              : domain_kind::quadrant;
        c.system.strengths = j.at("strengths").get<std::vector<double>>();
        for (const auto& p : j.at("positions")) {
          if (!p.is_array() || p.size() != 2)
            fail(errc::schema_error, "positions must be [x, y] pairs");
          c.system.positions.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        detail::read_if(j, "tracers", c.system.tracer);
        if (j.contains("halfplane_normalization")) {
          const auto s = j.at("halfplane_normalization").get<std::string>();
          if (s == "eq9")
            c.normalization = half_plane_normalization::eq9;
          else if (s == "greens")
            c.normalization = half_plane_normalization::greens;
          else
            fail(errc::schema_error, "halfplane_normalization must be eq9|greens");
        }
        break;
      }
      case model_kind::rings: {
        for (const auto& q : j.at("rings")) {
          ring r;
          r.z = q.at("z").get<double>();
          r.r = detail::require_positive(q, "r");
          r.gamma = q.at("gamma").get<double>();
          r.core = detail::require_positive(q, "core");
          c.rings.rings.push_back(r);
        }
        break;
      }
      case model_kind::membrane: {
        const json& m = j.at("membrane");
        c.membrane.a = detail::require_positive(m, "a");
        c.membrane.b = detail::require_positive(m, "b");
        c.membrane.m = m.at("m").get<int>();
        c.membrane.l = m.at("l").get<int>();
        if (c.membrane.m < 1 || c.membrane.l < 1)
          fail(errc::schema_error, "sphere dimensions m, l must be >= 1");
        break;
      }
      case model_kind::restricted3: {
        const json& r = j.at("restricted3");
        c.restricted3.x = r.at("x").get<double>();
        c.restricted3.y = r.at("y").get<double>();
        detail::read_if(r, "epsilon", c.restricted3.epsilon);
        if (r.contains("omega0"))
          c.restricted3.omega0 = detail::require_positive(r, "omega0");
        if (c.restricted3.epsilon < 0.0)
          fail(errc::schema_error, "epsilon must be >= 0");
        break;
      }
    }
    if (j.contains("integrator")) {
      const json& g = j.at("integrator");
      if (g.contains("rel_tol")) c.integrator.rel_tol = detail::require_positive(g, "rel_tol");
      if (g.contains("abs_tol")) c.integrator.abs_tol = detail::require_positive(g, "abs_tol");
      if (g.contains("max_step")) c.integrator.max_step = detail::require_positive(g, "max_step");
      if (g.contains("min_step")) c.integrator.min_step = detail::require_positive(g, "min_step");
      if (g.contains("sample_dt")) c.integrator.sample_dt = detail::require_positive(g, "sample_dt");
      if (g.contains("drift_tol")) c.integrator.drift_tol = detail::require_positive(g, "drift_tol");
      detail::read_if(g, "t_end", c.integrator.t_end);
      if (c.integrator.t_end < 0.0) fail(errc::schema_error, "t_end must be >= 0");
    }
    if (j.contains("events")) {
      const json& e = j.at("events");
      if (e.contains("close_approach")) c.integrator.close_approach = detail::require_positive(e, "close_approach");
      if (e.contains("boundary")) c.integrator.boundary = detail::require_positive(e, "boundary");
      if (e.contains("collapse_radius")) c.integrator.collapse_radius = detail::require_positive(e, "collapse_radius");
      if (e.contains("escape_radius")) c.integrator.escape_radius = detail::require_positive(e, "escape_radius");
    }
    if (j.contains("poincare")) {
      const json& p = j.at("poincare");
      detail::read_if(p, "n_periods", c.poincare.n_periods);
      if (c.poincare.n_periods < 1) fail(errc::schema_error, "n_periods must be >= 1");
      detail::read_if(p, "epsilons", c.poincare.epsilons);
      for (double e : c.poincare.epsilons)
        if (e < 0.0) fail(errc::schema_error, "epsilons must be >= 0");
    }
    if (j.contains("sweep")) {
      sweep_options sw;
      sw.pointer = j.at("sweep").at("pointer").get<std::string>();
      sw.values = j.at("sweep").at("values").get<std::vector<double>>();
      detail::read_if(j.at("sweep"), "command", sw.command);
      if (sw.command != "simulate" && sw.command != "poincare")
        fail(errc::schema_error, "sweep.command must be simulate|poincare");
      if (sw.pointer.empty() || sw.pointer.front() != '/')
        fail(errc::schema_error, "sweep.pointer must be a JSON pointer");
      c.sweep = std::move(sw);
    }
    if (j.contains("outputs")) {
      const json& o = j.at("outputs");
      detail::read_if(o, "trajectory_csv", c.outputs.trajectory_csv);
      detail::read_if(o, "drift_json", c.outputs.drift_json);
      detail::read_if(o, "events_jsonl", c.outputs.events_jsonl);
      detail::read_if(o, "section_csv", c.outputs.section_csv);
    }
  } catch (const json::exception& e) {
    fail(errc::schema_error, e.what());
  }

  // Delegate the domain invariants; failures surface as ValidationError
  // with the offending index in the message.
  try {
    switch (c.model) {
      case model_kind::plane:
      case model_kind::half_plane:
      case model_kind::quadrant:
        validate_system(c.system);
        break;
      case model_kind::rings:
        validate_rings(c.rings);
        break;
      case model_kind::membrane:
        validate_membrane(c.membrane);
        break;
      case model_kind::restricted3:
        detail::restricted3_distances(c.restricted3.x, c.restricted3.y);
        break;
    }
    validate_settings(c.integrator);
  } catch (const error& e) {
    if (e.code() == errc::schema_error) throw;
    fail(errc::validation_error, e.what());
  }
  return c;
}

inline scenario_config parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(errc::schema_error, e.what());
  }
  return config_from_json(j);
}

inline std::string serialize_config(const scenario_config& c) {
  return config_to_json(c).dump(2);
}

// ---------------------------------------------------------------------------
// File output

namespace detail {

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::error_code ec;
  if (p.has_parent_path())
    std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream f(p);
  if (!f) fail(errc::io_error, "cannot open " + p.string() + " for writing");
  return f;
}

}  // namespace detail

/// Fixed-header CSV: t, state components in declaration order, then one
/// column per monitored invariant; 17 significant digits throughout.
inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const trajectory& tr,
                                 const std::vector<std::string>& state_names) {
  auto f = detail::open_out(path);
  f << "t";
  for (const auto& s : state_names) f << "," << s;
  for (const auto& s : tr.invariant_names) f << "," << s;
  f << "\n";
  for (std::size_t k = 0; k < tr.samples(); ++k) {
    f << detail::fmt17(tr.times[k]);
    for (double v : tr.states[k]) f << "," << detail::fmt17(v);
    for (const auto& series : tr.invariants)
      f << "," << detail::fmt17(series[k]);
    f << "\n";
  }
  if (!f) fail(errc::io_error, "failed writing " + path.string());
}

struct csv_table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline csv_table read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) fail(errc::io_error, "cannot open " + path.string());
  csv_table t;
  std::string line;
  if (!std::getline(f, line)) fail(errc::io_error, "empty CSV " + path.string());
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream rs(line);
    std::vector<double> row;
    while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.header.size())
      fail(errc::io_error, "ragged CSV row in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_drift_json(const std::filesystem::path& path,
                             const trajectory& tr, const drift_report& rep) {
  json j;
  j["model"] = model_name(tr.model);
  j["status"] = run_status_name(tr.status);
  j["samples"] = tr.samples();
  j["tolerance"] = rep.tolerance;
  j["pass"] = rep.pass;
  json items = json::array();
  for (const auto& d : rep.items)
    items.push_back({{"name", d.name},
                     {"initial", d.initial},
                     {"max_abs_drift", d.max_abs_drift},
                     {"max_rel_drift", d.max_rel_drift}});
  j["invariants"] = items;
  auto f = detail::open_out(path);
  f << j.dump(2) << "\n";
  if (!f) fail(errc::io_error, "failed writing " + path.string());
}

/// One JSON object per line, one line per event.
inline void write_events_jsonl(const std::filesystem::path& path,
                               const trajectory& tr) {
  auto f = detail::open_out(path);
  for (const event& ev : tr.events) {
    json j = {{"t", ev.t}, {"kind", event_name(ev.kind)}, {"detail", ev.detail}};
    f << j.dump() << "\n";
  }
  if (!f) fail(errc::io_error, "failed writing " + path.string());
}

inline void write_section_csv(const std::filesystem::path& path,
                              const section_result& sec) {
  auto f = detail::open_out(path);
  f << "k,x,y,H0\n";
  for (std::size_t k = 0; k < sec.points.size(); ++k)
    f << k << "," << detail::fmt17(sec.points[k].x) << ","
      << detail::fmt17(sec.points[k].y) << "," << detail::fmt17(sec.h0[k])
      << "\n";
  if (!f) fail(errc::io_error, "failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Run orchestration

struct run_result {
  int exit_code = exit_ok;
  trajectory traj;
  std::vector<std::string> files;
};

namespace detail {

template <class Model>
run_result run_model(const Model& model, const std::vector<double>& y0,
                     const scenario_config& cfg,
                     const std::filesystem::path& out_dir) {
  run_result res;
  res.traj = integrate(model, y0, cfg.integrator);
  const auto rep = monitor_invariants(res.traj, cfg.integrator.drift_tol);
  const auto traj_path = out_dir / cfg.outputs.trajectory_csv;
  const auto drift_path = out_dir / cfg.outputs.drift_json;
  const auto events_path = out_dir / cfg.outputs.events_jsonl;
  write_trajectory_csv(traj_path, res.traj, model.state_names());
  write_drift_json(drift_path, res.traj, rep);
  write_events_jsonl(events_path, res.traj);
  res.files = {traj_path.string(), drift_path.string(), events_path.string()};
  switch (res.traj.status) {
    case run_status::completed: res.exit_code = exit_ok; break;
    case run_status::event_stop: res.exit_code = exit_event_stop; break;
    case run_status::step_underflow: res.exit_code = exit_integration; break;
  }
  return res;
}

}  // namespace detail

/// Runs a simulate scenario and writes trajectory CSV, drift-report JSON and
/// event log. Exit codes: 0 success, 2 validation, 3 integration failure
/// (StepUnderflow), 4 I/O, 5 stopped early by a terminal event.
inline run_result run_scenario(const scenario_config& cfg,
                               const std::filesystem::path& out_dir = ".") {
  switch (cfg.model) {
    case model_kind::plane:
      return detail::run_model(plane_model::from_system(cfg.system),
                               pack_positions(cfg.system), cfg, out_dir);
    case model_kind::half_plane:
      return detail::run_model(
          half_plane_model::from_system(cfg.system, cfg.normalization),
          pack_positions(cfg.system), cfg, out_dir);
    case model_kind::quadrant:
      return detail::run_model(quadrant_model::from_system(cfg.system),
                               pack_positions(cfg.system), cfg, out_dir);
    case model_kind::rings:
      return detail::run_model(ring_model::from_system(cfg.rings),
                               ring_model::pack(cfg.rings), cfg, out_dir);
    case model_kind::membrane:
      return detail::run_model(membrane_model::from_state(cfg.membrane),
                               membrane_model::pack(cfg.membrane), cfg, out_dir);
    case model_kind::restricted3:
      return detail::run_model(restricted3_model::from_state(cfg.restricted3),
                               restricted3_model::pack(cfg.restricted3), cfg,
                               out_dir);
  }
  fail(errc::invalid_state, "unreachable model kind");
}

/// Appends a suffix to a filename, keeping the extension:
/// ("section.csv", "_eps0") -> "section_eps0.csv".
inline std::string suffixed_filename(const std::string& name,
                                     const std::string& suffix) {
  const auto dot = name.find_last_of('.');
  if (dot == std::string::npos) return name + suffix;
  return name.substr(0, dot) + suffix + name.substr(dot);
}

}  // namespace vortexlab
