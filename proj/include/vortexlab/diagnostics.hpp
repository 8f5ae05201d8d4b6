#pragma once

// Qualitative diagnostics: stroboscopic Poincare sections of the perturbed
// restricted three-vortex system, leapfrogging classification for pairs, and
// separation/boundary time series.

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "vortexlab/core.hpp"
#include "vortexlab/integrate.hpp"
#include "vortexlab/models.hpp"

namespace vortexlab {

enum class section_status { completed, orbit_escaped, singular_approach };

inline const char* section_status_name(section_status s) noexcept {
  switch (s) {
    case section_status::completed: return "Completed";
    case section_status::orbit_escaped: return "OrbitEscaped";
    case section_status::singular_approach: return "SingularApproach";
  }
  return "?";
}

struct section_result {
  std::vector<vec2> points;  ///< one per completed forcing period, first at t = 0
  std::vector<double> h0;    ///< H0 at each section point
  section_status status = section_status::completed;
};

/// Stroboscopic map of the restricted three-vortex system sampled at
/// t = k T, T = 2 pi / omega0, k = 0 .. n_periods-1. Returns fewer points if
/// the orbit escapes settings.escape_radius or enters the 1e-3 neighborhood
/// of a leading-order vortex.
inline section_result poincare_section(const restricted3_state& st0,
                                       std::size_t n_periods,
                                       integrator_settings settings) {
  if (n_periods < 1) fail(errc::invalid_state, "need n_periods >= 1");
  const auto model = restricted3_model::from_state(st0);
  const double period = model.period();
  settings.sample_dt = period;
  settings.t_end = static_cast<double>(n_periods - 1) * period;

  section_result out;
  if (n_periods == 1) {
    model.validate_initial(restricted3_model::pack(st0));
    out.points.push_back({st0.x, st0.y});
    out.h0.push_back(restricted3_h0(st0.x, st0.y, st0.omega0));
    return out;
  }

  const trajectory tr =
      integrate(model, restricted3_model::pack(st0), settings);
  for (std::size_t k = 0; k < tr.samples(); ++k) {
    // keep only the stroboscopic grid; an event-stop appends an off-grid point
    const double phase = tr.times[k] / period;
    if (std::abs(phase - std::round(phase)) > 1e-9) continue;
    out.points.push_back({tr.states[k][0], tr.states[k][1]});
    out.h0.push_back(tr.invariants[0][k]);
  }
  if (tr.status == run_status::event_stop) {
    out.status = section_status::completed;
    for (const event& ev : tr.events) {
      if (ev.kind == event_kind::orbit_escaped)
        out.status = section_status::orbit_escaped;
      if (ev.kind == event_kind::singular_approach)
        out.status = section_status::singular_approach;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

enum class leapfrog_class { leapfrog, passing, co_translating, undetermined };

inline const char* leapfrog_class_name(leapfrog_class c) noexcept {
  switch (c) {
    case leapfrog_class::leapfrog: return "Leapfrog";
    case leapfrog_class::passing: return "Passing";
    case leapfrog_class::co_translating: return "CoTranslating";
    case leapfrog_class::undetermined: return "Undetermined";
  }
  return "?";
}

/// Classifies the mutual motion of two same-sign half-plane vortices or two
/// coaxial rings from an integrated trajectory. The relative axial coordinate
/// is state[0] - state[2] (x_r or Z1 - Z2); the separation is the Euclidean
/// distance in the (axial, transverse) plane.
///
/// Thresholds (artifact conventions): Leapfrog needs >= 3 axial overtakes
/// with max/min separation ratio < 1e3; CoTranslating allows < 1% separation
/// variation; Passing is exactly one overtake followed by monotone growth.
inline leapfrog_class leapfrog_classify(const trajectory& tr, double gamma1,
                                        double gamma2) {
  if (tr.samples() < 2 || (tr.states.front().size() != 4))
    fail(errc::wrong_arity, "leapfrog_classify expects a 2-body trajectory");
  if (!(gamma1 * gamma2 > 0.0))
    fail(errc::mixed_signs, "leapfrog_classify expects same-sign strengths");

  const std::size_t n = tr.samples();
  std::vector<double> rel(n), sep(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = tr.states[k];
    rel[k] = s[0] - s[2];
    sep[k] = std::hypot(s[0] - s[2], s[1] - s[3]);
  }

  double sep_min = std::numeric_limits<double>::infinity(), sep_max = 0.0;
  std::size_t min_idx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (sep[k] < sep_min) {
      sep_min = sep[k];
      min_idx = k;
    }
    sep_max = std::max(sep_max, sep[k]);
  }

  int sign_changes = 0;
  double prev = rel[0];
  for (std::size_t k = 1; k < n; ++k) {
    if (rel[k] == 0.0) continue;
    if (prev != 0.0 && rel[k] * prev < 0.0) ++sign_changes;
    prev = rel[k];
  }

  if (sep_max / sep_min - 1.0 < 0.01) return leapfrog_class::co_translating;
  if (sign_changes >= 3 && sep_max / sep_min < 1e3)
    return leapfrog_class::leapfrog;
  if (sign_changes == 1) {
    bool monotone = true;
    for (std::size_t k = min_idx; k + 1 < n; ++k)
      if (sep[k + 1] < sep[k] * (1.0 - 1e-9)) {
        monotone = false;
        break;
      }
    if (monotone && sep.back() > sep[min_idx]) return leapfrog_class::passing;
  }
  return leapfrog_class::undetermined;
}

// ---------------------------------------------------------------------------

struct separation_data {
  std::vector<double> times;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<double>> pair_distance;      ///< aligned with pairs
  std::vector<std::vector<double>> boundary_distance;  ///< one series per body
};

/// Exact per-sample pairwise and wall distances for the vortex models
/// (plane, half-plane, quadrant, rings). Plane has no boundary series.
inline separation_data separation_series(const trajectory& tr) {
  if (tr.model != model_kind::plane && tr.model != model_kind::half_plane &&
      tr.model != model_kind::quadrant && tr.model != model_kind::rings)
    fail(errc::invalid_state, "separation_series expects a vortex model");
  if (tr.samples() == 0) fail(errc::invalid_state, "empty trajectory");

  separation_data out;
  out.times = tr.times;
  const std::size_t n = tr.states.front().size() / 2;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.pairs.emplace_back(i, j);
  out.pair_distance.resize(out.pairs.size());
  const bool has_boundary = tr.model != model_kind::plane;
  if (has_boundary) out.boundary_distance.resize(n);

  for (std::size_t k = 0; k < tr.samples(); ++k) {
    const auto& s = tr.states[k];
    for (std::size_t p = 0; p < out.pairs.size(); ++p) {
      const auto [i, j] = out.pairs[p];
      out.pair_distance[p].push_back(
          std::hypot(s[2 * i] - s[2 * j], s[2 * i + 1] - s[2 * j + 1]));
    }
    for (std::size_t i = 0; i < n && has_boundary; ++i) {
      double d = s[2 * i + 1];  // half-plane height / ring radius
      if (tr.model == model_kind::quadrant) d = std::min(s[2 * i], s[2 * i + 1]);
      out.boundary_distance[i].push_back(d);
    }
  }
  return out;
}

}  // namespace vortexlab
