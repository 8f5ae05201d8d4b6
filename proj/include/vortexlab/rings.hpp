#pragma once

// Dyson's model of N thin-cored coaxial vortex rings. Ring i is the circle
// of radius R_i in the plane z = Z_i around the symmetry axis, carrying
// circulation Gamma_i with core radius a_i.
//
//   dZ_i/dt = Gamma_i/(4 pi R_i) [log(8 R_i/a_i) - 1/4] + (1/(Gamma_i R_i)) dU/dR_i
//   dR_i/dt = -(1/(Gamma_i R_i)) dU/dZ_i
//   U = (1/2pi) sum_{j != i} Gamma_i Gamma_j G(Z_i, R_i, Z_j, R_j)
//   G(z, r, z', r') = (r r'/4pi) Int_0^{2pi} cos(t) dt / sqrt((z-z')^2 + r^2 + r'^2 - 2 r r' cos t)
//
// The baseline Green function is adaptive quadrature of the integral above;
// green_ring_fast is its closed-form reduction to complete elliptic
// integrals, validated against the quadrature and never the source of truth.
//
// Core radii are constants of the motion here. With fixed cores the flow
// above conserves the bracket-(-5/4) Hamiltonian (hamiltonian_rings_fixed_core);
// the classical thin-ring energy with bracket -7/4 (hamiltonian_rings) is a
// first integral only under core-volume conservation a^2 R = const, which is
// out of scope. The two differ by sum_i Gamma_i^2 R_i / (8 pi).

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "vortexlab/core.hpp"
#include "vortexlab/numerics.hpp"
#include "vortexlab/planar.hpp"

namespace vortexlab {

struct ring {
  double z = 0.0;      ///< axial position of the core center
  double r = 1.0;      ///< ring radius, > 0
  double gamma = 1.0;  ///< circulation
  double core = 0.01;  ///< core radius a, 0 < a << r

  friend bool operator==(const ring&, const ring&) = default;
};

struct ring_system {
  std::vector<ring> rings;

  std::size_t size() const noexcept { return rings.size(); }

  friend bool operator==(const ring_system&, const ring_system&) = default;
};

/// Relative gap below which a ring pair counts as dangerously close; the
/// integrator raises a NearSingular event there.
inline constexpr double ring_near_singular_gap = 1e-3;

inline void validate_rings(const ring_system& s) {
  if (s.rings.empty()) fail(errc::empty_system, "system has no rings");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const ring& q = s.rings[i];
    if (!(q.r > 0.0))
      fail(errc::invalid_state, "ring " + std::to_string(i) + " has R <= 0");
    if (!(q.core > 0.0))
      fail(errc::invalid_state, "ring " + std::to_string(i) + " has a <= 0");
    if (!(q.core < 0.2 * q.r))
      fail(errc::invalid_state,
           "ring " + std::to_string(i) + " violates the thin-core bound a < 0.2 R");
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double dz = s.rings[i].z - s.rings[j].z;
      const double dr = s.rings[i].r - s.rings[j].r;
      if (std::hypot(dz, dr) < coincidence_tol)
        fail(errc::coincident_rings,
             "rings " + std::to_string(i) + " and " + std::to_string(j) +
                 " coincide");
    }
}

/// Non-fatal conditions worth reporting: thick-ish cores and nearly
/// coincident ring pairs.
inline std::vector<std::string> ring_warnings(const ring_system& s) {
  std::vector<std::string> w;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.rings[i].core > 0.05 * s.rings[i].r)
      w.push_back("ring " + std::to_string(i) +
                  " has a/R > 0.05; the thin-core expansion degrades");
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double gap = std::hypot(s.rings[i].z - s.rings[j].z,
                                    s.rings[i].r - s.rings[j].r);
      const double scale = 0.5 * (s.rings[i].r + s.rings[j].r);
      if (gap < ring_near_singular_gap * scale)
        w.push_back("rings " + std::to_string(i) + " and " + std::to_string(j) +
                    " are nearly coincident");
    }
  return w;
}

namespace detail {

inline void require_distinct_rings(double z, double r, double zp, double rp) {
  if (!(r > 0.0 && rp > 0.0))
    fail(errc::invalid_state, "ring radii must be positive");
  if (std::hypot(z - zp, r - rp) < coincidence_tol)
    fail(errc::coincident_rings, "coincident rings in Green function");
}

}  // namespace detail

/// Mutual Green function by adaptive quadrature of the defining integral;
/// abs_tol applies to the bare theta-integral. The denominator is evaluated
/// as gap^2 + 4 r r' sin^2(theta/2), which stays fully accurate for nearly
/// coincident rings where r^2 + r'^2 - 2 r r' cos(theta) cancels.
inline double green_ring(double z, double r, double zp, double rp,
                         double abs_tol = 1e-12) {
  detail::require_distinct_rings(z, r, zp, rp);
  const double gap2 = (z - zp) * (z - zp) + (r - rp) * (r - rp);
  const double four_rr = 4.0 * r * rp;
  const double integral = num::integrate_adaptive<double>(
      [&](double theta) {
        const double s2 = std::sin(0.5 * theta) * std::sin(0.5 * theta);
        return (1.0 - 2.0 * s2) / std::sqrt(gap2 + four_rr * s2);
      },
      0.0, two_pi, abs_tol);
  return r * rp / (2.0 * two_pi) * integral;
}

/// Closed-form reduction of green_ring to complete elliptic integrals:
///   G = (sqrt(A)/4pi) [(2 - k^2) K(k^2) - 2 E(k^2)],
///   A = (z-z')^2 + (r+r')^2,  k^2 = 4 r r'/A.
inline double green_ring_fast(double z, double r, double zp, double rp) {
  detail::require_distinct_rings(z, r, zp, rp);
  const double big_a = (z - zp) * (z - zp) + (r + rp) * (r + rp);
  const double m = 4.0 * r * rp / big_a;
  const auto ke = num::complete_elliptic(m);
  return std::sqrt(big_a) / (2.0 * two_pi) * ((2.0 - m) * ke.k - 2.0 * ke.e);
}

struct ring_green_grad {
  double dz = 0.0;
  double dr = 0.0;  ///< derivative in the first-slot radius r
};

/// Partial derivatives of green_ring in its first-slot arguments, by
/// differentiation under the integral sign (the integrand is smooth for
/// distinct rings). One adaptive pass integrates the three moments
///   I1 = cos t / S,  I2 = cos t / S^3,  I3 = cos^2 t / S^3
/// together, sharing the sqrt.
inline ring_green_grad green_ring_grad(double z, double r, double zp, double rp,
                                       double abs_tol = 1e-12) {
  detail::require_distinct_rings(z, r, zp, rp);
  const double gap2 = (z - zp) * (z - zp) + (r - rp) * (r - rp);
  const double four_rr = 4.0 * r * rp;
  const auto moments = num::integrate_adaptive<std::array<double, 3>>(
      [&](double theta) {
        const double s2 = std::sin(0.5 * theta) * std::sin(0.5 * theta);
        const double c = 1.0 - 2.0 * s2;
        const double den = gap2 + four_rr * s2;
        const double s = std::sqrt(den);
        const double inv3 = 1.0 / (den * s);
        return std::array<double, 3>{c / s, c * inv3, c * c * inv3};
      },
      0.0, two_pi, abs_tol);
  const double quarter_pi_inv = 1.0 / (2.0 * two_pi);
  ring_green_grad g;
  g.dz = -r * rp * (z - zp) * quarter_pi_inv * moments[1];
  g.dr = rp * quarter_pi_inv * moments[0] -
         r * rp * quarter_pi_inv * (r * moments[1] - rp * moments[2]);
  return g;
}

/// Axial translation speed of an isolated thin ring,
/// V = Gamma/(4 pi R) [log(8R/a) - 1/4].
inline double ring_self_speed(double gamma, double big_r, double core) {
  return gamma / (2.0 * two_pi * big_r) * (std::log(8.0 * big_r / core) - 0.25);
}

/// Interaction energy U between distinct rings.
inline double ring_interaction_energy(const ring_system& s,
                                      double abs_tol = 1e-12) {
  double u = 0.0;
  constexpr double pi = two_pi / 2.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      u += s.rings[i].gamma * s.rings[j].gamma / pi *
           green_ring(s.rings[i].z, s.rings[i].r, s.rings[j].z, s.rings[j].r,
                      abs_tol);
  return u;
}

struct ring_velocity {
  double dz = 0.0;
  double dr = 0.0;
};

/// Self-induced plus mutual velocities; reduces to (ring_self_speed, 0) for
/// a single ring.
inline std::vector<ring_velocity> velocity_rings(const ring_system& s,
                                                 double abs_tol = 1e-12) {
  constexpr double pi = two_pi / 2.0;
  const std::size_t n = s.size();
  std::vector<ring_velocity> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ring& qi = s.rings[i];
    double du_dz = 0.0, du_dr = 0.0;  // (1/Gamma_i) * dU/d(Z_i, R_i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const ring& qj = s.rings[j];
      const auto g = green_ring_grad(qi.z, qi.r, qj.z, qj.r, abs_tol);
      du_dz += qj.gamma / pi * g.dz;
      du_dr += qj.gamma / pi * g.dr;
    }
    v[i].dz = ring_self_speed(qi.gamma, qi.r, qi.core) + du_dr / qi.r;
    v[i].dr = -du_dz / qi.r;
  }
  return v;
}

namespace detail {

inline double ring_hamiltonian_impl(const ring_system& s, double bracket_shift,
                                    double abs_tol) {
  double h = 0.0;
  for (const ring& q : s.rings)
    h += q.gamma * q.gamma / (2.0 * two_pi) * q.r *
         (std::log(8.0 * q.r / q.core) - bracket_shift);
  return h + ring_interaction_energy(s, abs_tol);
}

inline std::vector<ring_green_grad> ring_interaction_grad(
    const ring_system& s, double abs_tol) {
  constexpr double pi = two_pi / 2.0;
  const std::size_t n = s.size();
  std::vector<ring_green_grad> grad(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto g = green_ring_grad(s.rings[i].z, s.rings[i].r, s.rings[j].z,
                                     s.rings[j].r, abs_tol);
      const double w = s.rings[i].gamma * s.rings[j].gamma / pi;
      grad[i].dz += w * g.dz;
      grad[i].dr += w * g.dr;
    }
  return grad;
}

inline std::vector<ring_green_grad> ring_hamiltonian_grad_impl(
    const ring_system& s, double bracket_shift, double abs_tol) {
  auto grad = ring_interaction_grad(s, abs_tol);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const ring& q = s.rings[i];
    grad[i].dr += q.gamma * q.gamma / (2.0 * two_pi) *
                  (std::log(8.0 * q.r / q.core) - bracket_shift + 1.0);
  }
  return grad;
}

}  // namespace detail

/// Thin-ring energy form H = sum (Gamma^2/4pi) R [log(8R/a) - 7/4] + U.
inline double hamiltonian_rings(const ring_system& s, double abs_tol = 1e-12) {
  return detail::ring_hamiltonian_impl(s, 1.75, abs_tol);
}

/// First integral of velocity_rings with fixed cores:
/// H = sum (Gamma^2/4pi) R [log(8R/a) - 5/4] + U. Satisfies
/// Gamma_i R_i dZ_i/dt = dH/dR_i and Gamma_i R_i dR_i/dt = -dH/dZ_i exactly.
inline double hamiltonian_rings_fixed_core(const ring_system& s,
                                           double abs_tol = 1e-12) {
  return detail::ring_hamiltonian_impl(s, 1.25, abs_tol);
}

/// Analytic gradient of hamiltonian_rings (per ring: dH/dZ_i, dH/dR_i).
inline std::vector<ring_green_grad> hamiltonian_rings_gradient(
    const ring_system& s, double abs_tol = 1e-12) {
  return detail::ring_hamiltonian_grad_impl(s, 1.75, abs_tol);
}

inline std::vector<ring_green_grad> hamiltonian_rings_fixed_core_gradient(
    const ring_system& s, double abs_tol = 1e-12) {
  return detail::ring_hamiltonian_grad_impl(s, 1.25, abs_tol);
}

/// The second first integral, sum Gamma_i R_i^2.
inline double ring_moment(const ring_system& s) {
  double m = 0.0;
  for (const ring& q : s.rings) m += q.gamma * q.r * q.r;
  return m;
}

}  // namespace vortexlab
