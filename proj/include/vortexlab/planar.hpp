#pragma once

// N-vortex dynamics in the whole plane: velocity field, interaction
// Hamiltonian and its analytic gradient. The gradient doubles as the
// velocity field through the weighted symplectic relations
//   Gamma_i dx_i/dt =  dH/dy_i,
//   Gamma_i dy_i/dt = -dH/dx_i.

#include <cmath>
#include <vector>

#include "vortexlab/core.hpp"

namespace vortexlab {

inline constexpr double two_pi = 6.28318530717958647692;

/// Velocities induced on each vortex by all the others. A tracer (Gamma = 0)
/// is advected by the same interaction sum; it contributes nothing to it.
inline std::vector<vec2> velocity_plane(const vortex_system& s) {
  const std::size_t n = s.size();
  std::vector<vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double vx = 0.0, vy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const vec2 d = s.positions[i] - s.positions[j];
      const double l2 = d.x * d.x + d.y * d.y;
      if (l2 < coincidence_tol * coincidence_tol)
        fail(errc::coincident_vortices, "zero separation in velocity_plane");
      const double w = s.strengths[j] / (two_pi * l2);
      vx -= w * d.y;
      vy += w * d.x;
    }
    v[i] = {vx, vy};
  }
  return v;
}

/// Interaction energy H = -(1/4pi) sum_{j != i} Gamma_i Gamma_j log l_ij.
/// Empty interaction sum (N = 1) gives 0.
inline double hamiltonian_plane(const vortex_system& s) {
  const std::size_t n = s.size();
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double l = norm(s.positions[i] - s.positions[j]);
      if (l < coincidence_tol)
        fail(errc::coincident_vortices, "zero separation in hamiltonian_plane");
      h -= s.strengths[i] * s.strengths[j] * std::log(l) / two_pi;
    }
  return h;
}

/// Analytic gradient (dH/dx_i, dH/dy_i) of hamiltonian_plane.
inline std::vector<vec2> hamiltonian_plane_gradient(const vortex_system& s) {
  const std::size_t n = s.size();
  std::vector<vec2> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double gx = 0.0, gy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const vec2 d = s.positions[i] - s.positions[j];
      const double l2 = d.x * d.x + d.y * d.y;
      if (l2 < coincidence_tol * coincidence_tol)
        fail(errc::coincident_vortices, "zero separation in plane gradient");
      const double w = s.strengths[i] * s.strengths[j] / (two_pi * l2);
      gx -= w * d.x;
      gy -= w * d.y;
    }
    g[i] = {gx, gy};
  }
  return g;
}

}  // namespace vortexlab
