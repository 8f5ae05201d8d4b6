#pragma once

// Model-agnostic adaptive time integration with invariant recording and
// event detection. The stepper is the Dormand-Prince 5(4) embedded pair with
// the standard quartic dense-output interpolant; steps are accepted only when
// the embedded error estimate passes the mixed absolute/relative test, and
// event times are refined by bisection on the dense output.
//
// A Model provides:
//   std::size_t dimension() const
//   model_kind kind() const
//   void rhs(double t, const double* y, double* dydt) const
//   std::vector<std::string> invariant_names() const
//   void invariant_values(double t, const double* y, double* out) const
//   std::vector<event_spec> event_specs(const integrator_settings&,
//                                       const std::vector<double>& y0) const
//   void validate_initial(const std::vector<double>& y0) const
//   std::vector<std::string> state_names() const

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "vortexlab/core.hpp"

namespace vortexlab {

struct integrator_settings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 1e3;
  double min_step = 1e-13;
  double t_end = 10.0;
  double sample_dt = 0.1;

  // event thresholds
  double close_approach = 1e-3;
  double boundary = 1e-3;
  double collapse_radius = 1e-8;  ///< relative to the initial membrane radius
  double escape_radius = 10.0;    ///< restricted3 orbits beyond this escape

  double drift_tol = 1e-8;  ///< pass/fail bound used by monitor_invariants
  std::size_t max_steps = 50'000'000;

  friend bool operator==(const integrator_settings&, const integrator_settings&) = default;
};

inline void validate_settings(const integrator_settings& s) {
  if (!(s.rel_tol > 0.0 && s.abs_tol > 0.0))
    fail(errc::invalid_state, "integrator tolerances must be positive");
  if (!(s.min_step > 0.0 && s.min_step <= s.max_step))
    fail(errc::invalid_state, "need 0 < min_step <= max_step");
  if (!(s.sample_dt > 0.0))
    fail(errc::invalid_state, "sample_dt must be positive");
  if (!(s.close_approach > 0.0 && s.boundary > 0.0 && s.collapse_radius > 0.0))
    fail(errc::invalid_state, "event thresholds must be positive");
}

/// One monitored event function. The event fires when value() crosses from
/// positive to <= 0 between two accepted steps; terminal events stop the run.
/// remap_time, when set, converts the crossing time into the reported event
/// time (used to extrapolate the membrane collapse to its exact instant).
struct event_spec {
  event_kind kind = event_kind::close_approach;
  bool terminal = false;
  std::string detail;
  std::function<double(double, const std::vector<double>&)> value;
  std::function<double(double, const std::vector<double>&)> remap_time;
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// b - bhat, the embedded error weights.
inline constexpr double dp_e[7] = {71.0 / 57600,  0.0,           -71.0 / 16695,
                                   71.0 / 1920,   -17253.0 / 339200,
                                   22.0 / 525,    -1.0 / 40};
// Dense-output D row.
inline constexpr double dp_d[7] = {
    -12715105075.0 / 11282082432.0, 0.0,
    87487479700.0 / 32700410799.0,  -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0, -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0};

/// Quartic interpolant over one accepted step [t0, t0 + h].
struct dense_output {
  double t0 = 0.0, h = 0.0;
  std::vector<double> c1, c2, c3, c4, c5;

  void build(double t, double step, const std::vector<double>& y,
             const std::vector<double>& y_new,
             const std::vector<double> k[7]) {
    const std::size_t n = y.size();
    t0 = t;
    h = step;
    c1 = y;
    c2.resize(n);
    c3.resize(n);
    c4.resize(n);
    c5.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = y_new[i] - y[i];
      const double bspl = step * k[0][i] - ydiff;
      c2[i] = ydiff;
      c3[i] = bspl;
      c4[i] = ydiff - step * k[6][i] - bspl;
      c5[i] = step * (dp_d[0] * k[0][i] + dp_d[2] * k[2][i] + dp_d[3] * k[3][i] +
                      dp_d[4] * k[4][i] + dp_d[5] * k[5][i] + dp_d[6] * k[6][i]);
    }
  }

  void eval(double t, std::vector<double>& out) const {
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    out.resize(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i)
      out[i] = c1[i] + theta * (c2[i] + theta1 * (c3[i] + theta * (c4[i] + theta1 * c5[i])));
  }
};

inline double error_norm(const std::vector<double>& err,
                         const std::vector<double>& y0,
                         const std::vector<double>& y1, double atol,
                         double rtol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

template <class Rhs>
double initial_step(const Rhs& rhs, double t0, const std::vector<double>& y0,
                    const std::vector<double>& f0, double atol, double rtol,
                    double max_step, double span) {
  const std::size_t n = y0.size();
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / n);
  d1 = std::sqrt(d1 / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min({h0, max_step, span});
  if (!(h0 > 0.0)) return span;

  std::vector<double> y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
  rhs(t0 + h0, y1.data(), f1.data());
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::abs(y0[i]);
    const double q = (f1[i] - f0[i]) / sc;
    d2 += q * q;
  }
  d2 = std::sqrt(d2 / n) / h0;

  double h1;
  if (std::max(d1, d2) <= 1e-15)
    h1 = std::max(1e-6, h0 * 1e-3);
  else
    h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
  if (!std::isfinite(h1)) h1 = h0 * 1e-3;  // probe left the domain
  const double h = std::min({100.0 * h0, h1, max_step, span});
  return (std::isfinite(h) && h > 0.0) ? h : std::min(1e-6, span);
}

/// Bisect a positive-to-nonpositive crossing of g on [t_lo, t_hi] down to
/// time tolerance; returns the refined crossing time (first instant with
/// g <= 0, within tol).
template <class G>
double bisect_crossing(const G& g, double t_lo, double t_hi, double tol = 1e-9) {
  double lo = t_lo, hi = t_hi;
  for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace detail

/// Integrates the model from y0 to settings.t_end with dense-output samples
/// every sample_dt, recording all model invariants per sample and all
/// detected events. Deterministic: identical inputs give bit-identical
/// trajectories.
template <class Model>
trajectory integrate(const Model& model, const std::vector<double>& y0,
                     const integrator_settings& st, double t0 = 0.0) {
  validate_settings(st);
  model.validate_initial(y0);
  if (y0.size() != model.dimension())
    fail(errc::invalid_state, "state size does not match the model");

  const std::size_t n = y0.size();
  trajectory tr;
  tr.model = model.kind();
  tr.invariant_names = model.invariant_names();
  tr.invariants.resize(tr.invariant_names.size());

  std::vector<double> inv_scratch(tr.invariant_names.size());
  auto record = [&](double t, const std::vector<double>& y) {
    tr.times.push_back(t);
    tr.states.push_back(y);
    model.invariant_values(t, y.data(), inv_scratch.data());
    for (std::size_t m = 0; m < inv_scratch.size(); ++m)
      tr.invariants[m].push_back(inv_scratch[m]);
  };

  // rhs wrapper: an exception inside a trial stage (state wandered out of
  // the domain) poisons the stage with NaN so the step gets rejected.
  auto rhs = [&](double t, const double* y, double* dy) {
    try {
      model.rhs(t, y, dy);
    } catch (const error&) {
      for (std::size_t i = 0; i < n; ++i) dy[i] = std::numeric_limits<double>::quiet_NaN();
    }
  };

  std::vector<double> y = y0;
  double t = t0;
  record(t, y);
  if (!(st.t_end > t0)) return tr;  // zero horizon: exactly the initial sample

  auto specs = model.event_specs(st, y0);
  std::vector<double> event_value(specs.size());
  for (std::size_t e = 0; e < specs.size(); ++e)
    event_value[e] = specs[e].value(t, y);

  std::vector<double> k[7];
  for (auto& ki : k) ki.resize(n);
  std::vector<double> y_stage(n), y_new(n), err_vec(n), sample(n);
  detail::dense_output dense;

  rhs(t, y.data(), k[0].data());
  double h = detail::initial_step(rhs, t, y, k[0], st.abs_tol, st.rel_tol,
                                  st.max_step, st.t_end - t0);

  long next_sample = 1;
  const auto sample_time = [&](long idx) { return t0 + idx * st.sample_dt; };

  bool last_rejected = false;
  std::size_t steps = 0;

  while (t < st.t_end) {
    if (++steps > st.max_steps)
      fail(errc::invalid_state, "step budget exhausted");
    bool clamped = false;
    if (h > st.t_end - t) {
      h = st.t_end - t;
      clamped = true;
    }

    // stages
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += detail::dp_a[s][j] * k[j][i];
        y_stage[i] = y[i] + h * acc;
      }
      double* out = (s == 6) ? k[6].data() : k[s].data();
      if (s == 6) y_new = y_stage;  // stage 7 state is the 5th-order solution
      rhs(t + detail::dp_c[s] * h, y_stage.data(), out);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int s = 0; s < 7; ++s) acc += detail::dp_e[s] * k[s][i];
      err_vec[i] = h * acc;
    }
    const double err =
        detail::error_norm(err_vec, y, y_new, st.abs_tol, st.rel_tol);

    if (!(std::isfinite(err) && err <= 1.0)) {
      // reject
      ++tr.stats.rejected;
      const double factor =
          std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= std::min(factor, 1.0);
      last_rejected = true;
      if (h < st.min_step) {
        tr.status = run_status::step_underflow;
        if (tr.times.empty() || tr.times.back() < t) record(t, y);
        return tr;
      }
      continue;
    }

    const double t_new = clamped ? st.t_end : t + h;
    if (t_new == t) {  // step below time resolution at this t
      tr.status = run_status::step_underflow;
      if (tr.times.empty() || tr.times.back() < t) record(t, y);
      return tr;
    }
    dense.build(t, t_new - t, y, y_new, k);

    // events: find the earliest terminal crossing, record non-terminal ones
    double t_stop = std::numeric_limits<double>::infinity();
    std::size_t stop_spec = specs.size();
    std::vector<event> step_events;
    for (std::size_t e = 0; e < specs.size(); ++e) {
      const double v_new = specs[e].value(t_new, y_new);
      if (event_value[e] > 0.0 && v_new <= 0.0) {
        auto g = [&](double tm) {
          dense.eval(tm, sample);
          return specs[e].value(tm, sample);
        };
        const double t_cross = detail::bisect_crossing(g, t, t_new);
        if (specs[e].terminal) {
          if (t_cross < t_stop) {
            t_stop = t_cross;
            stop_spec = e;
          }
        } else {
          dense.eval(t_cross, sample);
          const double t_report = specs[e].remap_time
                                      ? specs[e].remap_time(t_cross, sample)
                                      : t_cross;
          step_events.push_back({t_report, specs[e].kind, specs[e].detail});
        }
      }
      event_value[e] = v_new;
    }

    const double t_reached = std::min(t_new, t_stop);
    for (const event& ev : step_events)
      if (ev.t <= t_reached) tr.events.push_back(ev);

    // interior samples compare exactly; only the clamped final step absorbs
    // grid roundoff past t_end
    const double fuzz = t_reached == st.t_end
                            ? 1e-12 * std::max(1.0, std::abs(t_reached))
                            : 0.0;
    while (sample_time(next_sample) <= t_reached + fuzz) {
      const double ts = std::min(sample_time(next_sample), t_reached);
      dense.eval(ts, sample);
      record(ts, sample);
      ++next_sample;
    }

    if (stop_spec < specs.size()) {
      dense.eval(t_stop, sample);
      const double t_report = specs[stop_spec].remap_time
                                  ? specs[stop_spec].remap_time(t_stop, sample)
                                  : t_stop;
      tr.events.push_back({t_report, specs[stop_spec].kind, specs[stop_spec].detail});
      if (tr.times.empty() || tr.times.back() < t_stop) record(t_stop, sample);
      tr.status = run_status::event_stop;
      return tr;
    }

    // accept
    ++tr.stats.accepted;
    tr.stats.max_accepted_error = std::max(tr.stats.max_accepted_error, err);
    t = t_new;
    y = y_new;
    k[0] = k[6];  // FSAL
    double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    factor = std::min(last_rejected ? 1.0 : 5.0, std::max(0.2, factor));
    last_rejected = false;
    h = std::min(h * factor, st.max_step);
  }

  if (tr.times.empty() ||
      tr.times.back() < st.t_end - 1e-12 * std::max(1.0, std::abs(st.t_end)))
    record(st.t_end, y);
  tr.status = run_status::completed;
  return tr;
}

/// Crossing detection between two states outside the integrator, refined by
/// bisection on the straight-line interpolant between them.
template <class Model>
std::vector<event> detect_events(const Model& model,
                                 const integrator_settings& st, double t_prev,
                                 const std::vector<double>& y_prev,
                                 double t_curr,
                                 const std::vector<double>& y_curr) {
  auto specs = model.event_specs(st, y_prev);
  std::vector<event> found;
  std::vector<double> mid(y_prev.size());
  for (const auto& spec : specs) {
    const double v0 = spec.value(t_prev, y_prev);
    const double v1 = spec.value(t_curr, y_curr);
    if (!(v0 > 0.0 && v1 <= 0.0)) continue;
    auto g = [&](double tm) {
      const double u = (tm - t_prev) / (t_curr - t_prev);
      for (std::size_t i = 0; i < mid.size(); ++i)
        mid[i] = (1.0 - u) * y_prev[i] + u * y_curr[i];
      return spec.value(tm, mid);
    };
    const double t_cross = detail::bisect_crossing(g, t_prev, t_curr);
    const double u = (t_cross - t_prev) / (t_curr - t_prev);
    for (std::size_t i = 0; i < mid.size(); ++i)
      mid[i] = (1.0 - u) * y_prev[i] + u * y_curr[i];
    const double t_report =
        spec.remap_time ? spec.remap_time(t_cross, mid) : t_cross;
    found.push_back({t_report, spec.kind, spec.detail});
  }
  return found;
}

// ---------------------------------------------------------------------------
// Invariant drift reporting

struct invariant_drift {
  std::string name;
  double initial = 0.0;
  double max_abs_drift = 0.0;
  double max_rel_drift = 0.0;
};

struct drift_report {
  std::vector<invariant_drift> items;
  double tolerance = 0.0;
  bool pass = true;
};

/// Per-invariant maximum absolute and relative drift over the trajectory.
/// The relative scale is max(|initial|, max_t |value|) floored at one, so an
/// invariant sitting at zero (a log, a symmetric moment) is judged by its
/// absolute drift instead of dividing the drift by itself.
inline drift_report monitor_invariants(const trajectory& tr,
                                       double tolerance = 1e-8) {
  if (tr.samples() == 0) fail(errc::invalid_state, "empty trajectory");
  drift_report rep;
  rep.tolerance = tolerance;
  for (std::size_t m = 0; m < tr.invariant_names.size(); ++m) {
    invariant_drift d;
    d.name = tr.invariant_names[m];
    const auto& series = tr.invariants[m];
    d.initial = series.front();
    double scale = std::abs(d.initial);
    for (double v : series) {
      d.max_abs_drift = std::max(d.max_abs_drift, std::abs(v - d.initial));
      scale = std::max(scale, std::abs(v));
    }
    d.max_rel_drift = d.max_abs_drift / std::max(scale, 1.0);
    rep.pass = rep.pass && d.max_rel_drift <= tolerance;
    rep.items.push_back(d);
  }
  return rep;
}

}  // namespace vortexlab
