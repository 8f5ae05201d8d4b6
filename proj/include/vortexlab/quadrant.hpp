#pragma once

// Single vortex in the open upper-right quadrant:
//   H = (Gamma^2/2pi) log(2xy/sqrt(x^2+y^2)),
//   dx/dt =  (Gamma/2pi)(1/y - y/(x^2+y^2)),
//   dy/dt = -(Gamma/2pi)(1/x - x/(x^2+y^2)),
// with the exact trajectory constant 4x^2y^2/(x^2+y^2) = C^2.

#include <cmath>

#include "vortexlab/core.hpp"
#include "vortexlab/planar.hpp"

namespace vortexlab {

namespace detail {
inline void require_quadrant_point(double x, double y) {
  if (!(x > 0.0 && y > 0.0))
    fail(errc::domain_violation, "quadrant vortex needs x > 0, y > 0");
}
}  // namespace detail

inline double hamiltonian_quadrant(double gamma, double x, double y) {
  detail::require_quadrant_point(x, y);
  return gamma * gamma / two_pi *
         std::log(2.0 * x * y / std::sqrt(x * x + y * y));
}

inline vec2 velocity_quadrant(double gamma, double x, double y) {
  detail::require_quadrant_point(x, y);
  const double r2 = x * x + y * y;
  return {gamma / two_pi * (1.0 / y - y / r2),
          -gamma / two_pi * (1.0 / x - x / r2)};
}

/// Analytic gradient (dH/dx, dH/dy) of hamiltonian_quadrant.
inline vec2 hamiltonian_quadrant_gradient(double gamma, double x, double y) {
  detail::require_quadrant_point(x, y);
  const double r2 = x * x + y * y;
  const double c = gamma * gamma / two_pi;
  return {c * (1.0 / x - x / r2), c * (1.0 / y - y / r2)};
}

/// Positive root C of 4x^2y^2/(x^2+y^2) = C^2; constant along exact orbits
/// and equal to exp(2 pi H / Gamma^2).
inline double trajectory_constant(double x, double y) {
  detail::require_quadrant_point(x, y);
  return 2.0 * x * y / std::sqrt(x * x + y * y);
}

/// Polar form of the same orbit: r = C / sin(2 theta), theta in (0, pi/2).
inline double quadrant_polar_radius(double c, double theta) {
  const double s = std::sin(2.0 * theta);
  if (!(s > 0.0))
    fail(errc::domain_violation, "polar angle outside (0, pi/2)");
  return c / s;
}

}  // namespace vortexlab
