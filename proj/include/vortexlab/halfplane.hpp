#pragma once

// N-vortex dynamics in the upper half-plane with the wall along y = 0,
// the two reduced two-vortex orbit equations, and the perturbed restricted
// three-vortex system in the co-rotating frame.
//
// The Hamiltonian is
//   H = (1/4pi) sum_{j!=i} G_i G_j log[(dx^2 + sy^2)/(dx^2 + dy^2)]
//     + (1/2pi) sum_i G_i^2 log(2 y_i)
// with dx = x_i - x_j, dy = y_i - y_j, sy = y_i + y_j. The self-interaction
// prefactor (1/2pi) follows this formula verbatim; the Green-function route
// through gamma_hat = (1/2pi) log(2y) yields exactly half of every term,
// selectable through half_plane_normalization::greens. Orbit-equation
// residuals are always evaluated in the verbatim convention, whose level
// sets coincide with the halved one.

#include <cmath>
#include <vector>

#include "vortexlab/core.hpp"
#include "vortexlab/planar.hpp"

namespace vortexlab {

enum class half_plane_normalization {
  eq9,     ///< verbatim self-interaction prefactor (1/2pi); the default
  greens,  ///< Green-function prefactor (1/4pi): every term halved
};

inline double normalization_factor(half_plane_normalization n) noexcept {
  return n == half_plane_normalization::eq9 ? 1.0 : 0.5;
}

namespace detail {

inline void require_half_plane(const vortex_system& s) {
  if (s.domain != domain_kind::half_plane)
    fail(errc::domain_violation, "expected a half-plane system");
}

struct pair_geometry {
  double dx, dy, sy, n, d;  // n = dx^2 + sy^2 (image), d = dx^2 + dy^2
};

inline pair_geometry pair_geom(vec2 a, vec2 b) {
  pair_geometry g;
  g.dx = a.x - b.x;
  g.dy = a.y - b.y;
  g.sy = a.y + b.y;
  g.n = g.dx * g.dx + g.sy * g.sy;
  g.d = g.dx * g.dx + g.dy * g.dy;
  if (g.d < coincidence_tol * coincidence_tol)
    fail(errc::coincident_vortices, "zero separation in half-plane system");
  return g;
}

}  // namespace detail

inline double hamiltonian_halfplane(
    const vortex_system& s,
    half_plane_normalization norm = half_plane_normalization::eq9) {
  detail::require_half_plane(s);
  const std::size_t n = s.size();
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = s.positions[i].y;
    if (!(yi > 0.0)) fail(errc::domain_violation, "vortex on or below the wall");
    h += s.strengths[i] * s.strengths[i] * std::log(2.0 * yi) / two_pi;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto g = detail::pair_geom(s.positions[i], s.positions[j]);
      h += s.strengths[i] * s.strengths[j] * std::log(g.n / g.d) / two_pi;
    }
  }
  return normalization_factor(norm) * h;
}

/// Analytic gradient (dH/dx_i, dH/dy_i) of hamiltonian_halfplane.
inline std::vector<vec2> hamiltonian_halfplane_gradient(
    const vortex_system& s,
    half_plane_normalization norm = half_plane_normalization::eq9) {
  detail::require_half_plane(s);
  const double scale = normalization_factor(norm);
  const std::size_t n = s.size();
  std::vector<vec2> grad(n);
  constexpr double pi = two_pi / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gi = s.strengths[i];
    const double yi = s.positions[i].y;
    if (!(yi > 0.0)) fail(errc::domain_violation, "vortex on or below the wall");
    double gx = 0.0;
    double gy = gi * gi / (two_pi * yi);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto g = detail::pair_geom(s.positions[i], s.positions[j]);
      const double w = gi * s.strengths[j] / pi;
      gx += w * g.dx * (1.0 / g.n - 1.0 / g.d);
      gy += w * (g.sy / g.n - g.dy / g.d);
    }
    grad[i] = {scale * gx, scale * gy};
  }
  return grad;
}

/// Velocities under the weighted symplectic relations. A flagged tracer
/// (Gamma = 0) is advected by the other vortices' field only, with no self
/// term; this is the continuous limit Gamma -> 0 of the regular dynamics.
inline std::vector<vec2> velocity_halfplane(
    const vortex_system& s,
    half_plane_normalization norm = half_plane_normalization::eq9) {
  detail::require_half_plane(s);
  const double scale = normalization_factor(norm);
  const std::size_t n = s.size();
  std::vector<vec2> v(n);
  constexpr double pi = two_pi / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = s.positions[i].y;
    if (!(yi > 0.0)) fail(errc::domain_violation, "vortex on or below the wall");
    double vx = 0.0, vy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto g = detail::pair_geom(s.positions[i], s.positions[j]);
      const double w = s.strengths[j] / pi;
      vx += w * (g.sy / g.n - g.dy / g.d);
      vy -= w * g.dx * (1.0 / g.n - 1.0 / g.d);
    }
    if (!s.is_tracer(i)) vx += s.strengths[i] / (two_pi * yi);
    v[i] = {scale * vx, scale * vy};
  }
  return v;
}

/// Conserved vertical coordinate of a two-vortex system: the center-of-
/// vorticity height y0 when the strengths do not cancel, the offset
/// y_r = y1 - y2 for the dipole.
inline double conserved_height(const vortex_system& s) {
  if (s.size() != 2) fail(errc::wrong_arity, "conserved_height expects N = 2");
  const double g1 = s.strengths[0], g2 = s.strengths[1];
  const double y1 = s.positions[0].y, y2 = s.positions[1].y;
  if (g1 + g2 == 0.0) return y1 - y2;
  return (g1 * y1 + g2 * y2) / (g1 + g2);
}

/// Closed-form motion of a single half-plane vortex: a straight line parallel
/// to the wall at speed Gamma/(2 pi y0) in the verbatim normalization.
inline vec2 single_vortex_halfplane_solution(
    double gamma, double x0, double y0, double t,
    half_plane_normalization norm = half_plane_normalization::eq9) {
  if (!(y0 > 0.0)) fail(errc::domain_violation, "single vortex needs y0 > 0");
  const double v = normalization_factor(norm) * gamma / (two_pi * y0);
  return {x0 + v * t, y0};
}

// ---------------------------------------------------------------------------
// Reduced two-vortex orbit equations

/// Parameters of the generic (G1 + G2 != 0) reduced orbit equation
///   (mu + c2 y_r)^{G1^2} (mu - c1 y_r)^{G2^2} *
///   [(x_r^2 + (2 mu + (c2 - c1) y_r... )^2)/(x_r^2 + y_r^2)]^{G1 G2} = e^{2 pi E}
/// with c_k = G_k/(G1 + G2). E follows the reduced-space convention: the
/// equation's LHS evaluated at the defining state, which differs from
/// hamiltonian_halfplane by the constant (G1^2 + G2^2) log(2) / (2 pi).
struct generic_orbit_params {
  double mu = 0.0;
  double energy = 0.0;       ///< E, reduced convention
  double level = 1.0;        ///< e^{2 pi E}
  double gamma1 = 1.0;
  double gamma2 = 1.0;

  static generic_orbit_params from_system(const vortex_system& s);
};

/// LHS of the generic orbit equation at relative coordinates (x_r, y_r).
inline double generic_orbit_lhs(double x_r, double y_r,
                                const generic_orbit_params& p) {
  const double gsum = p.gamma1 + p.gamma2;
  const double b1 = p.mu + p.gamma2 / gsum * y_r;  // = y1
  const double b2 = p.mu - p.gamma1 / gsum * y_r;  // = y2
  if (!(b1 > 0.0) || !(b2 > 0.0))
    fail(errc::non_positive_base,
         "orbit parameters imply a vortex height <= 0");
  const double sy = 2.0 * p.mu + (p.gamma2 - p.gamma1) / gsum * y_r;  // y1 + y2
  const double d = x_r * x_r + y_r * y_r;
  if (d < coincidence_tol * coincidence_tol)
    fail(errc::coincident_vortices, "orbit equation at zero separation");
  const double bracket = (x_r * x_r + sy * sy) / d;
  return std::pow(b1, p.gamma1 * p.gamma1) *
         std::pow(b2, p.gamma2 * p.gamma2) *
         std::pow(bracket, p.gamma1 * p.gamma2);
}

inline double orbit_residual_generic(double x_r, double y_r,
                                     const generic_orbit_params& p) {
  return generic_orbit_lhs(x_r, y_r, p) - p.level;
}

inline generic_orbit_params generic_orbit_params::from_system(
    const vortex_system& s) {
  if (s.size() != 2) fail(errc::wrong_arity, "generic orbit needs N = 2");
  validate_system(s);
  generic_orbit_params p;
  p.gamma1 = s.strengths[0];
  p.gamma2 = s.strengths[1];
  if (p.gamma1 + p.gamma2 == 0.0)
    fail(errc::invalid_state, "generic orbit equation needs G1 + G2 != 0");
  p.mu = conserved_height(s);
  const double x_r = s.positions[0].x - s.positions[1].x;
  const double y_r = s.positions[0].y - s.positions[1].y;
  p.level = generic_orbit_lhs(x_r, y_r, p);
  p.energy = std::log(p.level) / two_pi;
  return p;
}

/// Parameters of the dipole (G1 = 1, G2 = -1) reduced orbit equation
///   1/(nu^2 + x_r^2) + 1/(4 y0^2 - nu^2) = e^{-2 pi E} = C.
/// Here E is the plain value of hamiltonian_halfplane in the verbatim
/// normalization; the strengths must be exactly (1, -1) in either order.
struct dipole_orbit_params {
  double nu = 0.0;
  double energy = 0.0;
  double level = 1.0;  ///< C = e^{-2 pi E}

  static dipole_orbit_params from_system(const vortex_system& s);
};

inline double orbit_residual_dipole(double x_r, double y0,
                                    const dipole_orbit_params& p) {
  const double d1 = p.nu * p.nu + x_r * x_r;
  const double d2 = 4.0 * y0 * y0 - p.nu * p.nu;
  if (std::abs(d2) < 1e-14 * (4.0 * y0 * y0 + p.nu * p.nu))
    fail(errc::singular_denominator, "4 y0^2 = nu^2 is a wall configuration");
  if (d1 == 0.0)
    fail(errc::singular_denominator, "nu = x_r = 0 is a collision");
  return 1.0 / d1 + 1.0 / d2 - p.level;
}

inline dipole_orbit_params dipole_orbit_params::from_system(
    const vortex_system& s) {
  if (s.size() != 2) fail(errc::wrong_arity, "dipole orbit needs N = 2");
  validate_system(s);
  const double g1 = s.strengths[0], g2 = s.strengths[1];
  if (!((g1 == 1.0 && g2 == -1.0) || (g1 == -1.0 && g2 == 1.0)))
    fail(errc::invalid_state, "dipole orbit equation needs strengths (1, -1)");
  const std::size_t pos = g1 == 1.0 ? 0 : 1;  // index of the +1 vortex
  dipole_orbit_params p;
  p.nu = s.positions[pos].y - s.positions[1 - pos].y;
  p.energy = hamiltonian_halfplane(s);
  p.level = std::exp(-two_pi * p.energy);
  return p;
}

struct reachability_result {
  bool reachable = false;
  /// 4 y0^2 at the crossing x_r = 0, meaningful only when reachable.
  double four_y0_squared = 0.0;
};

/// Whether the dipole orbit crosses x_r = 0: true iff C > 1/nu^2.
inline reachability_result reachability_x_r_zero(const dipole_orbit_params& p) {
  if (p.nu == 0.0)
    fail(errc::zero_nu, "nu = 0 reduces to the quadrant problem");
  const double inv_nu2 = 1.0 / (p.nu * p.nu);
  if (p.level > inv_nu2) {
    return {true, p.level * p.nu * p.nu / (p.level - inv_nu2)};
  }
  return {false, 0.0};
}

// ---------------------------------------------------------------------------
// Restricted three-vortex system (two unit vortices + passive tracer) in the
// co-rotating frame:
//   H(x, y, t) = H0(x, y) + eps * H1(x, y, t)
//   H0 = (1/2pi) log{[x^2+(y-1)^2][x^2+(y+1)^2]} + (1/2) w0 (x^2 + y^2)
//   H1 = -(5/4pi) (x sin(w0 t) + y cos(w0 t))
// with unit symplectic weight: dx/dt = dH/dy, dy/dt = -dH/dx.

/// Co-rotation frequency of two unit vortices at separation 2 in the rescaled
/// coordinates: each moves at speed 1/(4 pi) on a unit circle.
inline constexpr double restricted3_default_omega0 = 1.0 / (2.0 * two_pi);

struct restricted3_state {
  double x = 0.0;
  double y = 0.0;
  double epsilon = 0.0;
  double omega0 = restricted3_default_omega0;

  friend bool operator==(const restricted3_state&, const restricted3_state&) = default;
};

namespace detail {

struct restricted3_geom {
  double d1, d2;  // squared distances to the vortex locations (0, +-1)
};

inline restricted3_geom restricted3_distances(double x, double y) {
  restricted3_geom g;
  g.d1 = x * x + (y - 1.0) * (y - 1.0);
  g.d2 = x * x + (y + 1.0) * (y + 1.0);
  if (g.d1 < coincidence_tol * coincidence_tol ||
      g.d2 < coincidence_tol * coincidence_tol)
    fail(errc::singular_point, "tracer at a leading-order vortex location");
  return g;
}

}  // namespace detail

/// Autonomous part H0 alone; conserved exactly when eps = 0.
inline double restricted3_h0(double x, double y,
                             double omega0 = restricted3_default_omega0) {
  const auto g = detail::restricted3_distances(x, y);
  return std::log(g.d1 * g.d2) / two_pi + 0.5 * omega0 * (x * x + y * y);
}

inline double restricted3_hamiltonian(const restricted3_state& st, double t) {
  const double h0 = restricted3_h0(st.x, st.y, st.omega0);
  const double h1 = -5.0 / (2.0 * two_pi) *
                    (st.x * std::sin(st.omega0 * t) + st.y * std::cos(st.omega0 * t));
  return h0 + st.epsilon * h1;
}

/// Analytic gradient (dH/dx, dH/dy) at time t.
inline vec2 restricted3_gradient(const restricted3_state& st, double t) {
  const auto g = detail::restricted3_distances(st.x, st.y);
  constexpr double pi = two_pi / 2.0;
  const double gx0 = st.x / pi * (1.0 / g.d1 + 1.0 / g.d2) + st.omega0 * st.x;
  const double gy0 =
      ((st.y - 1.0) / g.d1 + (st.y + 1.0) / g.d2) / pi + st.omega0 * st.y;
  const double c = -5.0 / (2.0 * two_pi);
  return {gx0 + st.epsilon * c * std::sin(st.omega0 * t),
          gy0 + st.epsilon * c * std::cos(st.omega0 * t)};
}

inline vec2 restricted3_velocity(const restricted3_state& st, double t) {
  const vec2 g = restricted3_gradient(st, t);
  return {g.y, -g.x};
}

}  // namespace vortexlab
