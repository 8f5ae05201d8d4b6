#pragma once

// Shared domain types for the vortex models: point-vortex configurations in
// the plane, half-plane and quadrant, plus the trajectory record produced by
// the integrator.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vortexlab/errors.hpp"

namespace vortexlab {

struct vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const vec2&, const vec2&) = default;
};

inline vec2 operator+(vec2 a, vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline vec2 operator-(vec2 a, vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline vec2 operator*(double s, vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(vec2 a, vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(vec2 a) { return std::hypot(a.x, a.y); }

enum class domain_kind { plane, half_plane, quadrant };

inline const char* domain_name(domain_kind d) noexcept {
  switch (d) {
    case domain_kind::plane: return "plane";
    case domain_kind::half_plane: return "half_plane";
    case domain_kind::quadrant: return "quadrant";
  }
  return "?";
}

/// Separations below this are treated as a coincident-vortex collision;
/// the log potential is meaningless below double-precision resolution.
inline constexpr double coincidence_tol = 1e-12;

/// N point vortices with circulations, positions and a bounding domain.
/// A vortex may be flagged as a passive tracer, in which case its strength
/// must be exactly zero and it is advected without inducing any flow.
struct vortex_system {
  std::vector<double> strengths;
  std::vector<vec2> positions;
  domain_kind domain = domain_kind::plane;
  std::vector<bool> tracer;  // empty means "no tracers"

  std::size_t size() const noexcept { return strengths.size(); }
  bool is_tracer(std::size_t i) const noexcept {
    return i < tracer.size() && tracer[i];
  }

  friend bool operator==(const vortex_system&, const vortex_system&) = default;
};

/// Checks every structural invariant of a vortex_system. Throws
/// EmptySystem, DomainViolation or CoincidentVortices; returns normally iff
/// the system is valid. Pure and idempotent.
inline void validate_system(const vortex_system& s) {
  const std::size_t n = s.size();
  if (n == 0) fail(errc::empty_system, "system has no vortices");
  if (s.positions.size() != n)
    fail(errc::invalid_state, "strengths and positions differ in length");
  if (!s.tracer.empty() && s.tracer.size() != n)
    fail(errc::invalid_state, "tracer flags differ in length");

  for (std::size_t i = 0; i < n; ++i) {
    if (s.is_tracer(i)) {
      if (s.strengths[i] != 0.0)
        fail(errc::invalid_state,
             "tracer vortex " + std::to_string(i) + " has nonzero strength");
    } else if (s.strengths[i] == 0.0) {
      fail(errc::invalid_state,
           "vortex " + std::to_string(i) + " has zero strength (not flagged as tracer)");
    }
    const vec2 p = s.positions[i];
    switch (s.domain) {
      case domain_kind::plane:
        break;
      case domain_kind::half_plane:
        if (!(p.y > 0.0))
          fail(errc::domain_violation,
               "vortex " + std::to_string(i) + " has y = " + std::to_string(p.y) +
                   " <= 0 in the half-plane");
        break;
      case domain_kind::quadrant:
        if (!(p.x > 0.0 && p.y > 0.0))
          fail(errc::domain_violation,
               "vortex " + std::to_string(i) + " outside the open quadrant");
        break;
    }
  }
  if (s.domain == domain_kind::quadrant && n != 1)
    fail(errc::invalid_state, "quadrant model supports exactly one vortex");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (norm(s.positions[i] - s.positions[j]) < coincidence_tol)
        fail(errc::coincident_vortices,
             "vortices " + std::to_string(i) + " and " + std::to_string(j) +
                 " coincide");
}

/// The three linear/quadratic first integrals of the whole-plane flow.
struct plane_moments {
  double q;  ///< sum Gamma_i x_i
  double p;  ///< sum Gamma_i y_i
  double i;  ///< sum Gamma_i (x_i^2 + y_i^2)
};

inline plane_moments plane_invariants(const vortex_system& s) {
  plane_moments m{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double g = s.strengths[k];
    const vec2 p = s.positions[k];
    m.q += g * p.x;
    m.p += g * p.y;
    m.i += g * (p.x * p.x + p.y * p.y);
  }
  return m;
}

/// Tests the necessary condition for self-similar collapse,
/// sum_{i<j} Gamma_i Gamma_j = 0, within a relative tolerance.
inline bool collapse_condition(const std::vector<double>& strengths,
                               double tol = 1e-12) {
  double sum = 0.0;
  double scale = 0.0;
  const std::size_t n = strengths.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      sum += strengths[i] * strengths[j];
      scale += std::abs(strengths[i] * strengths[j]);
    }
  return std::abs(sum) <= tol * scale;
}

// ---------------------------------------------------------------------------
// Trajectory record

enum class model_kind { plane, half_plane, quadrant, rings, membrane, restricted3 };

inline const char* model_name(model_kind m) noexcept {
  switch (m) {
    case model_kind::plane: return "plane";
    case model_kind::half_plane: return "half_plane";
    case model_kind::quadrant: return "quadrant";
    case model_kind::rings: return "rings";
    case model_kind::membrane: return "membrane";
    case model_kind::restricted3: return "restricted3";
  }
  return "?";
}

enum class event_kind {
  close_approach,
  boundary_approach,
  collapse,
  near_singular,
  orbit_escaped,
  singular_approach,
};

inline const char* event_name(event_kind k) noexcept {
  switch (k) {
    case event_kind::close_approach: return "CloseApproach";
    case event_kind::boundary_approach: return "BoundaryApproach";
    case event_kind::collapse: return "Collapse";
    case event_kind::near_singular: return "NearSingular";
    case event_kind::orbit_escaped: return "OrbitEscaped";
    case event_kind::singular_approach: return "SingularApproach";
  }
  return "?";
}

struct event {
  double t = 0.0;
  event_kind kind = event_kind::close_approach;
  std::string detail;
};

enum class run_status { completed, event_stop, step_underflow };

inline const char* run_status_name(run_status s) noexcept {
  switch (s) {
    case run_status::completed: return "Completed";
    case run_status::event_stop: return "EventStop";
    case run_status::step_underflow: return "StepUnderflow";
  }
  return "?";
}

struct integration_stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// largest scaled embedded error estimate among accepted steps; the step
  /// controller keeps this <= 1 by construction
  double max_accepted_error = 0.0;
};

/// Time-stamped state snapshots with per-snapshot invariant values and the
/// events detected along the run. states[k] is the flat state vector at
/// times[k]; invariants[m][k] is invariant m at sample k.
struct trajectory {
  model_kind model = model_kind::plane;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::string> invariant_names;
  std::vector<std::vector<double>> invariants;
  std::vector<event> events;
  run_status status = run_status::completed;
  integration_stats stats;

  std::size_t samples() const noexcept { return times.size(); }
};

}  // namespace vortexlab
