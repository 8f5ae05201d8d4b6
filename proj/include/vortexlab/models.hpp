#pragma once

// Adapters binding each dynamical model to the integrator: flat state
// packing, right-hand sides, per-sample invariants and event functions.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "vortexlab/core.hpp"
#include "vortexlab/halfplane.hpp"
#include "vortexlab/integrate.hpp"
#include "vortexlab/membranes.hpp"
#include "vortexlab/planar.hpp"
#include "vortexlab/quadrant.hpp"
#include "vortexlab/rings.hpp"

namespace vortexlab {

namespace detail {

inline std::vector<double> pack_xy(const std::vector<vec2>& pos) {
  std::vector<double> y(2 * pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    y[2 * i] = pos[i].x;
    y[2 * i + 1] = pos[i].y;
  }
  return y;
}

inline std::vector<vec2> unpack_xy(const double* y, std::size_t n) {
  std::vector<vec2> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = {y[2 * i], y[2 * i + 1]};
  return pos;
}

inline std::vector<std::string> indexed_names(const char* a, const char* b,
                                              std::size_t n) {
  std::vector<std::string> names;
  if (n == 1) return {a, b};
  for (std::size_t i = 1; i <= n; ++i) {
    names.push_back(a + std::to_string(i));
    names.push_back(b + std::to_string(i));
  }
  return names;
}

inline double min_pair_distance(const std::vector<vec2>& pos) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j)
      d = std::min(d, norm(pos[i] - pos[j]));
  return d;
}

}  // namespace detail

/// Flat state vector [x1, y1, x2, y2, ...] for the point-vortex models.
inline std::vector<double> pack_positions(const vortex_system& s) {
  return detail::pack_xy(s.positions);
}

// ---------------------------------------------------------------------------

struct plane_model {
  std::vector<double> strengths;
  std::vector<bool> tracer;

  static plane_model from_system(const vortex_system& s) {
    if (s.domain != domain_kind::plane)
      fail(errc::domain_violation, "plane_model needs a plane system");
    validate_system(s);
    return {s.strengths, s.tracer};
  }

  vortex_system system_at(const double* y) const {
    return {strengths, detail::unpack_xy(y, strengths.size()),
            domain_kind::plane, tracer};
  }

  std::size_t dimension() const { return 2 * strengths.size(); }
  model_kind kind() const { return model_kind::plane; }
  std::vector<std::string> state_names() const {
    return detail::indexed_names("x", "y", strengths.size());
  }

  void rhs(double, const double* y, double* dy) const {
    const auto v = velocity_plane(system_at(y));
    for (std::size_t i = 0; i < v.size(); ++i) {
      dy[2 * i] = v[i].x;
      dy[2 * i + 1] = v[i].y;
    }
  }

  std::vector<std::string> invariant_names() const { return {"H", "Q", "P", "I"}; }

  void invariant_values(double, const double* y, double* out) const {
    const auto s = system_at(y);
    const auto m = plane_invariants(s);
    out[0] = hamiltonian_plane(s);
    out[1] = m.q;
    out[2] = m.p;
    out[3] = m.i;
  }

  void validate_initial(const std::vector<double>& y) const {
    validate_system(system_at(y.data()));
  }

  std::vector<event_spec> event_specs(const integrator_settings& st,
                                      const std::vector<double>&) const {
    std::vector<event_spec> specs;
    if (strengths.size() > 1) {
      event_spec close;
      close.kind = event_kind::close_approach;
      close.detail = "pairwise vortex distance below threshold";
      const std::size_t n = strengths.size();
      const double thr = st.close_approach;
      close.value = [n, thr](double, const std::vector<double>& y) {
        return detail::min_pair_distance(detail::unpack_xy(y.data(), n)) - thr;
      };
      specs.push_back(std::move(close));
    }
    return specs;
  }
};

// ---------------------------------------------------------------------------

struct half_plane_model {
  std::vector<double> strengths;
  std::vector<bool> tracer;
  half_plane_normalization normalization = half_plane_normalization::eq9;

  static half_plane_model from_system(
      const vortex_system& s,
      half_plane_normalization norm = half_plane_normalization::eq9) {
    if (s.domain != domain_kind::half_plane)
      fail(errc::domain_violation, "half_plane_model needs a half-plane system");
    validate_system(s);
    return {s.strengths, s.tracer, norm};
  }

  vortex_system system_at(const double* y) const {
    return {strengths, detail::unpack_xy(y, strengths.size()),
            domain_kind::half_plane, tracer};
  }

  std::size_t dimension() const { return 2 * strengths.size(); }
  model_kind kind() const { return model_kind::half_plane; }
  std::vector<std::string> state_names() const {
    return detail::indexed_names("x", "y", strengths.size());
  }

  std::size_t active_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < strengths.size(); ++i)
      if (!(i < tracer.size() && tracer[i])) ++n;
    return n;
  }

  vortex_system active_pair(const double* y) const {
    vortex_system sub;
    sub.domain = domain_kind::half_plane;
    for (std::size_t i = 0; i < strengths.size(); ++i)
      if (!(i < tracer.size() && tracer[i])) {
        sub.strengths.push_back(strengths[i]);
        sub.positions.push_back({y[2 * i], y[2 * i + 1]});
      }
    return sub;
  }

  void rhs(double, const double* y, double* dy) const {
    const auto v = velocity_halfplane(system_at(y), normalization);
    for (std::size_t i = 0; i < v.size(); ++i) {
      dy[2 * i] = v[i].x;
      dy[2 * i + 1] = v[i].y;
    }
  }

  std::vector<std::string> invariant_names() const {
    std::vector<std::string> names = {"H"};
    if (active_count() == 2) {
      const auto sum = [&] {
        double g = 0.0;
        for (std::size_t i = 0; i < strengths.size(); ++i)
          if (!(i < tracer.size() && tracer[i])) g += strengths[i];
        return g;
      }();
      names.push_back(sum == 0.0 ? "yr" : "y0");
    }
    return names;
  }

  void invariant_values(double, const double* y, double* out) const {
    out[0] = hamiltonian_halfplane(system_at(y), normalization);
    if (active_count() == 2) out[1] = conserved_height(active_pair(y));
  }

  void validate_initial(const std::vector<double>& y) const {
    validate_system(system_at(y.data()));
  }

  std::vector<event_spec> event_specs(const integrator_settings& st,
                                      const std::vector<double>&) const {
    std::vector<event_spec> specs;
    const std::size_t n = strengths.size();
    if (n > 1) {
      event_spec close;
      close.kind = event_kind::close_approach;
      close.detail = "pairwise vortex distance below threshold";
      const double thr = st.close_approach;
      close.value = [n, thr](double, const std::vector<double>& y) {
        return detail::min_pair_distance(detail::unpack_xy(y.data(), n)) - thr;
      };
      specs.push_back(std::move(close));
    }
    event_spec wall;
    wall.kind = event_kind::boundary_approach;
    wall.detail = "vortex height above the wall below threshold";
    const double thr = st.boundary;
    wall.value = [n, thr](double, const std::vector<double>& y) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) m = std::min(m, y[2 * i + 1]);
      return m - thr;
    };
    specs.push_back(std::move(wall));
    return specs;
  }
};

// ---------------------------------------------------------------------------

struct quadrant_model {
  double gamma = 1.0;

  static quadrant_model from_system(const vortex_system& s) {
    if (s.domain != domain_kind::quadrant)
      fail(errc::domain_violation, "quadrant_model needs a quadrant system");
    validate_system(s);
    return {s.strengths[0]};
  }

  std::size_t dimension() const { return 2; }
  model_kind kind() const { return model_kind::quadrant; }
  std::vector<std::string> state_names() const { return {"x", "y"}; }

  void rhs(double, const double* y, double* dy) const {
    const vec2 v = velocity_quadrant(gamma, y[0], y[1]);
    dy[0] = v.x;
    dy[1] = v.y;
  }

  std::vector<std::string> invariant_names() const { return {"H", "C"}; }

  void invariant_values(double, const double* y, double* out) const {
    out[0] = hamiltonian_quadrant(gamma, y[0], y[1]);
    out[1] = trajectory_constant(y[0], y[1]);
  }

  void validate_initial(const std::vector<double>& y) const {
    if (gamma == 0.0) fail(errc::invalid_state, "quadrant vortex needs Gamma != 0");
    detail::require_quadrant_point(y[0], y[1]);
  }

  std::vector<event_spec> event_specs(const integrator_settings& st,
                                      const std::vector<double>&) const {
    event_spec wall;
    wall.kind = event_kind::boundary_approach;
    wall.detail = "distance to a quadrant wall below threshold";
    const double thr = st.boundary;
    wall.value = [thr](double, const std::vector<double>& y) {
      return std::min(y[0], y[1]) - thr;
    };
    return {wall};
  }
};

// ---------------------------------------------------------------------------

struct ring_model {
  std::vector<double> strengths;
  std::vector<double> cores;
  double quad_tol = 1e-12;

  static ring_model from_system(const ring_system& s, double quad_tol = 1e-12) {
    validate_rings(s);
    ring_model m;
    m.quad_tol = quad_tol;
    for (const ring& q : s.rings) {
      m.strengths.push_back(q.gamma);
      m.cores.push_back(q.core);
    }
    return m;
  }

  static std::vector<double> pack(const ring_system& s) {
    std::vector<double> y;
    for (const ring& q : s.rings) {
      y.push_back(q.z);
      y.push_back(q.r);
    }
    return y;
  }

  ring_system system_at(const double* y) const {
    ring_system s;
    for (std::size_t i = 0; i < strengths.size(); ++i)
      s.rings.push_back({y[2 * i], y[2 * i + 1], strengths[i], cores[i]});
    return s;
  }

  std::size_t dimension() const { return 2 * strengths.size(); }
  model_kind kind() const { return model_kind::rings; }
  std::vector<std::string> state_names() const {
    return detail::indexed_names("Z", "R", strengths.size());
  }

  void rhs(double, const double* y, double* dy) const {
    const auto v = velocity_rings(system_at(y), quad_tol);
    for (std::size_t i = 0; i < v.size(); ++i) {
      dy[2 * i] = v[i].dz;
      dy[2 * i + 1] = v[i].dr;
    }
  }

  std::vector<std::string> invariant_names() const {
    return {"H", "sum_gamma_R2"};
  }

  void invariant_values(double, const double* y, double* out) const {
    const auto s = system_at(y);
    out[0] = hamiltonian_rings_fixed_core(s, quad_tol);
    out[1] = ring_moment(s);
  }

  void validate_initial(const std::vector<double>& y) const {
    validate_rings(system_at(y.data()));
  }

  std::vector<event_spec> event_specs(const integrator_settings& st,
                                      const std::vector<double>&) const {
    std::vector<event_spec> specs;
    const std::size_t n = strengths.size();
    if (n > 1) {
      event_spec close;
      close.kind = event_kind::close_approach;
      close.detail = "ring pair gap in (Z, R) below threshold";
      const double thr = st.close_approach;
      close.value = [n, thr](double, const std::vector<double>& y) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            d = std::min(d, std::hypot(y[2 * i] - y[2 * j],
                                       y[2 * i + 1] - y[2 * j + 1]));
        return d - thr;
      };
      specs.push_back(std::move(close));

      event_spec near;
      near.kind = event_kind::near_singular;
      near.detail = "relative ring gap below 1e-3; interaction accuracy degrades";
      near.value = [n](double, const std::vector<double>& y) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = std::hypot(y[2 * i] - y[2 * j],
                                          y[2 * i + 1] - y[2 * j + 1]);
            const double scale = 0.5 * (y[2 * i + 1] + y[2 * j + 1]);
            d = std::min(d, gap / scale);
          }
        return d - ring_near_singular_gap;
      };
      specs.push_back(std::move(near));
    }
    event_spec axis;
    axis.kind = event_kind::boundary_approach;
    axis.detail = "ring radius below threshold";
    const double thr = st.boundary;
    axis.value = [n, thr](double, const std::vector<double>& y) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) m = std::min(m, y[2 * i + 1]);
      return m - thr;
    };
    specs.push_back(std::move(axis));
    return specs;
  }
};

// ---------------------------------------------------------------------------

struct membrane_model {
  int m = 1;
  int l = 1;

  static membrane_model from_state(const sphere_product_state& st) {
    validate_membrane(st);
    return {st.m, st.l};
  }

  static std::vector<double> pack(const sphere_product_state& st) {
    return {st.a, st.b};
  }

  sphere_product_state state_at(const double* y) const {
    return {y[0], y[1], m, l};
  }

  std::size_t dimension() const { return 2; }
  model_kind kind() const { return model_kind::membrane; }
  std::vector<std::string> state_names() const { return {"a", "b"}; }

  void rhs(double, const double* y, double* dy) const {
    const auto [da, db] = membrane_rhs(state_at(y));
    dy[0] = da;
    dy[1] = db;
  }

  std::vector<std::string> invariant_names() const { return {"log_volume"}; }

  void invariant_values(double, const double* y, double* out) const {
    out[0] = membrane_volume_invariant(state_at(y));
  }

  void validate_initial(const std::vector<double>& y) const {
    validate_membrane(state_at(y.data()));
  }

  std::vector<event_spec> event_specs(const integrator_settings& st,
                                      const std::vector<double>& y0) const {
    event_spec collapse;
    collapse.kind = event_kind::collapse;
    collapse.detail = "membrane radius a shrank below the collapse threshold";
    collapse.terminal = true;
    const double thr = st.collapse_radius * y0[0];
    collapse.value = [thr](double, const std::vector<double>& y) {
      return y[0] - thr;
    };
    if (m < l) {
      // At detection the remaining life is exactly a*b/(l - m).
      const double dml = static_cast<double>(l - m);
      collapse.remap_time = [dml](double t, const std::vector<double>& y) {
        return t + y[0] * y[1] / dml;
      };
    }
    return {collapse};
  }
};

// ---------------------------------------------------------------------------

struct restricted3_model {
  double epsilon = 0.0;
  double omega0 = restricted3_default_omega0;

  static restricted3_model from_state(const restricted3_state& st) {
    if (!(st.omega0 > 0.0)) fail(errc::invalid_state, "omega0 must be positive");
    return {st.epsilon, st.omega0};
  }

  static std::vector<double> pack(const restricted3_state& st) {
    return {st.x, st.y};
  }

  restricted3_state state_at(const double* y) const {
    return {y[0], y[1], epsilon, omega0};
  }

  double period() const { return two_pi / omega0; }

  std::size_t dimension() const { return 2; }
  model_kind kind() const { return model_kind::restricted3; }
  std::vector<std::string> state_names() const { return {"x", "y"}; }

  void rhs(double t, const double* y, double* dy) const {
    const vec2 v = restricted3_velocity(state_at(y), t);
    dy[0] = v.x;
    dy[1] = v.y;
  }

  std::vector<std::string> invariant_names() const { return {"H0"}; }

  void invariant_values(double, const double* y, double* out) const {
    out[0] = restricted3_h0(y[0], y[1], omega0);
  }

  void validate_initial(const std::vector<double>& y) const {
    if (!(omega0 > 0.0)) fail(errc::invalid_state, "omega0 must be positive");
    detail::restricted3_distances(y[0], y[1]);
  }

  std::vector<event_spec> event_specs(const integrator_settings& st,
                                      const std::vector<double>&) const {
    event_spec singular;
    singular.kind = event_kind::singular_approach;
    singular.detail = "tracer within 1e-3 of a leading-order vortex";
    singular.terminal = true;
    singular.value = [](double, const std::vector<double>& y) {
      const double d1 = std::hypot(y[0], y[1] - 1.0);
      const double d2 = std::hypot(y[0], y[1] + 1.0);
      return std::min(d1, d2) - 1e-3;
    };

    event_spec escape;
    escape.kind = event_kind::orbit_escaped;
    escape.detail = "tracer beyond the configured escape radius";
    escape.terminal = true;
    const double rad = st.escape_radius;
    escape.value = [rad](double, const std::vector<double>& y) {
      return rad - std::hypot(y[0], y[1]);
    };
    return {singular, escape};
  }
};

}  // namespace vortexlab
