#pragma once

// Sphere-product vortex membrane S^m(a) x S^l(b) under the binormal
// (skew-mean-curvature) flow. The radii obey
//   da/dt = -l/b,   db/dt = +m/a,
// with first integral ln(a^m b^l) (the log of the membrane volume up to a
// constant factor). For 0 < m < l the solution collapses at
// t* = a(0) b(0)/(l - m); otherwise it exists for all t >= 0.

#include <cmath>
#include <optional>
#include <utility>

#include "vortexlab/errors.hpp"

namespace vortexlab {

struct sphere_product_state {
  double a = 1.0;
  double b = 1.0;
  int m = 1;
  int l = 1;

  friend bool operator==(const sphere_product_state&, const sphere_product_state&) = default;
};

inline void validate_membrane(const sphere_product_state& st) {
  if (!(st.a > 0.0 && st.b > 0.0))
    fail(errc::invalid_state, "membrane radii must be positive");
  if (st.m < 1 || st.l < 1)
    fail(errc::invalid_state, "sphere dimensions must be >= 1");
}

/// Right-hand side (da/dt, db/dt); a shrinks and b grows, always.
inline std::pair<double, double> membrane_rhs(const sphere_product_state& st) {
  validate_membrane(st);
  return {-static_cast<double>(st.l) / st.b, static_cast<double>(st.m) / st.a};
}

/// Finite collapse time a0*b0/(l - m) for 0 < m < l, nothing otherwise.
inline std::optional<double> collapse_time(double a0, double b0, int m, int l) {
  validate_membrane({a0, b0, m, l});
  if (m < l) return a0 * b0 / static_cast<double>(l - m);
  return std::nullopt;
}

/// Exact radii at time t. Throws BeyondCollapse once t reaches the collapse
/// time of a 0 < m < l membrane.
inline std::pair<double, double> membrane_closed_form(double a0, double b0,
                                                      int m, int l, double t) {
  validate_membrane({a0, b0, m, l});
  if (m == l) {
    const double rate = t / (a0 * b0);
    return {a0 * std::exp(-l * rate), b0 * std::exp(m * rate)};
  }
  if (const auto tc = collapse_time(a0, b0, m, l); tc && t >= *tc)
    fail(errc::beyond_collapse, "time past the membrane collapse");
  const double dm = static_cast<double>(m), dl = static_cast<double>(l);
  const double a = std::pow(a0, dm / (dm - dl)) *
                   std::pow(a0 - (dl - dm) / b0 * t, dl / (dl - dm));
  const double b = std::pow(b0, dl / (dl - dm)) *
                   std::pow(b0 + (dm - dl) / a0 * t, dm / (dm - dl));
  return {a, b};
}

/// The conserved volume Hamiltonian ln(a^m b^l).
inline double membrane_volume_invariant(const sphere_product_state& st) {
  validate_membrane(st);
  return st.m * std::log(st.a) + st.l * std::log(st.b);
}

}  // namespace vortexlab
