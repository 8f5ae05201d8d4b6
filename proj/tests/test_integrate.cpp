#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vortexlab/integrate.hpp"
#include "vortexlab/membranes.hpp"
#include "vortexlab/models.hpp"

using namespace vortexlab;

namespace {

double final_state_error_membrane(double rel_tol) {
  membrane_model model{1, 2};
  integrator_settings st;
  st.rel_tol = rel_tol;
  st.abs_tol = rel_tol * 1e-2;
  st.t_end = 0.9;
  st.sample_dt = 0.9;
  const auto tr = integrate(model, {1.0, 1.0}, st);
  const auto [ax, bx] = membrane_closed_form(1.0, 1.0, 1, 2, 0.9);
  return std::max(std::abs(tr.states.back()[0] - ax),
                  std::abs(tr.states.back()[1] - bx));
}

double final_state_error_quadrant(double rel_tol) {
  quadrant_model model{1.0};
  integrator_settings st;
  st.rel_tol = rel_tol;
  st.abs_tol = rel_tol * 1e-2;
  st.t_end = 20.0;
  st.sample_dt = 20.0;
  const auto tr = integrate(model, {1.0, 1.0}, st);
  // exact relation along the orbit: C is conserved
  const double c = trajectory_constant(tr.states.back()[0], tr.states.back()[1]);
  return std::abs(c - std::sqrt(2.0));
}

}  // namespace

TEST_CASE("membrane endpoint matches the closed form") {
  membrane_model model{1, 1};
  integrator_settings st;
  st.t_end = 1.0;
  st.sample_dt = 0.1;
  const auto tr = integrate(model, {1.0, 1.0}, st);
  REQUIRE(tr.status == run_status::completed);
  REQUIRE(tr.times.back() == 1.0);
  REQUIRE(std::abs(tr.states.back()[0] - std::exp(-1.0)) < 1e-8);
  REQUIRE(std::abs(tr.states.back()[1] - std::exp(1.0)) < 1e-8);
}

TEST_CASE("collapse stops the run at the extrapolated instant") {
  membrane_model model{1, 2};
  integrator_settings st;
  st.t_end = 5.0;
  st.sample_dt = 0.1;
  const auto tr = integrate(model, {1.0, 1.0}, st);
  REQUIRE(tr.status == run_status::event_stop);
  REQUIRE(tr.events.size() == 1);
  REQUIRE(std::abs(tr.events[0].t - 1.0) < 1e-6);
  REQUIRE(tr.times.back() < 1.0);  // trajectory ends at detection
}

TEST_CASE("zero horizon returns exactly the initial sample") {
  membrane_model model{1, 1};
  integrator_settings st;
  st.t_end = 0.0;
  const auto tr = integrate(model, {2.0, 3.0}, st);
  REQUIRE(tr.samples() == 1);
  REQUIRE(tr.times[0] == 0.0);
  REQUIRE(tr.states[0] == std::vector<double>{2.0, 3.0});
}

TEST_CASE("repeated runs are bit-identical") {
  plane_model model{{1.0, 0.8, -0.6}, {}};
  const std::vector<double> y0{0.0, 0.0, 1.0, 0.2, -0.4, 1.1};
  integrator_settings st;
  st.t_end = 8.0;
  st.sample_dt = 0.05;
  const auto a = integrate(model, y0, st);
  const auto b = integrate(model, y0, st);
  REQUIRE(a.times == b.times);
  REQUIRE(a.states == b.states);
  REQUIRE(a.invariants == b.invariants);
  REQUIRE(a.stats.accepted == b.stats.accepted);
}

TEST_CASE("no accepted step exceeds the embedded error tolerance") {
  plane_model model{{1.0, 1.0}, {}};
  integrator_settings st;
  st.t_end = 50.0;
  st.sample_dt = 1.0;
  const auto tr = integrate(model, {1.0, 0.0, -1.0, 0.0}, st);
  REQUIRE(tr.stats.accepted > 0);
  REQUIRE(tr.stats.max_accepted_error <= 1.0);
}

TEST_CASE("tightening rel_tol tightens the final-state error") {
  // halving rel_tol cuts the closed-form error by at least 2x per halving;
  // measured across four halvings so step-count quantization averages out
  const double em1 = final_state_error_membrane(1e-5);
  const double em2 = final_state_error_membrane(1e-5 / 16.0);
  REQUIRE(em2 > 0.0);
  REQUIRE(em1 / em2 >= 16.0);

  const double eq1 = final_state_error_quadrant(1e-5);
  const double eq2 = final_state_error_quadrant(1e-5 / 16.0);
  REQUIRE(eq2 > 0.0);
  REQUIRE(eq1 / eq2 >= 16.0);

  // the single half-plane vortex is integrated exactly at any tolerance
  half_plane_model model{{1.0}, {}, half_plane_normalization::eq9};
  integrator_settings st;
  st.rel_tol = 1e-6;
  st.t_end = 10.0;
  st.sample_dt = 1.0;
  const auto tr = integrate(model, {0.0, 2.0}, st);
  const auto sol = single_vortex_halfplane_solution(1.0, 0.0, 2.0, 10.0);
  REQUIRE(std::abs(tr.states.back()[0] - sol.x) < 1e-12);
  REQUIRE(tr.states.back()[1] == 2.0);
}

TEST_CASE("stationary point vortex reports exactly zero drift") {
  plane_model model{{1.0}, {}};
  integrator_settings st;
  st.t_end = 10.0;
  st.sample_dt = 0.5;
  const auto tr = integrate(model, {0.3, -0.4}, st);
  const auto rep = monitor_invariants(tr);
  REQUIRE(rep.items.size() == 4);  // H, Q, P, I
  for (const auto& item : rep.items) {
    REQUIRE(item.max_abs_drift == 0.0);
    REQUIRE(item.max_rel_drift == 0.0);
  }
  REQUIRE(rep.pass);
}

TEST_CASE("ring runs report drift for H and the moment") {
  ring_model model{{1.0, 1.0}, {0.01, 0.01}};
  integrator_settings st;
  st.t_end = 2.0;
  st.sample_dt = 0.25;
  const auto tr = integrate(model, {0.0, 1.0, 0.8, 1.0}, st);
  const auto rep = monitor_invariants(tr);
  REQUIRE(rep.items.size() == 2);
  REQUIRE(rep.items[0].name == "H");
  REQUIRE(rep.items[1].name == "sum_gamma_R2");
}

TEST_CASE("standalone event detection refines the crossing time") {
  restricted3_model model{0.0, restricted3_default_omega0};
  integrator_settings st;
  // straight-line motion from distance 2e-3 to 5e-4 of the vortex at (0, 1)
  const std::vector<double> y_prev{0.0, 1.002};
  const std::vector<double> y_curr{0.0, 1.0005};
  const auto events = detect_events(model, st, 0.0, y_prev, 1.0, y_curr);
  REQUIRE(events.size() == 1);
  REQUIRE(events[0].kind == event_kind::singular_approach);
  REQUIRE(events[0].t == Catch::Approx(2.0 / 3.0).margin(1e-8));

  // no crossing, no events
  REQUIRE(detect_events(model, st, 0.0, {0.5, 0.0}, 1.0, {0.45, 0.1}).empty());
}

TEST_CASE("self-similar three-vortex collapse ends in step underflow") {
  // strengths satisfy sum G_i G_j = 0 and the side lengths satisfy
  // sum G_i G_j l_ij^2 = 0; one orientation collapses, the mirror expands
  const double y3 = std::sqrt(1.4375);
  const std::vector<double> strengths{1.0, 1.0, -0.5};
  integrator_settings st;
  st.t_end = 500.0;
  st.sample_dt = 0.5;
  st.min_step = 1e-8;

  int underflows = 0, completions = 0;
  for (double sign : {1.0, -1.0}) {
    plane_model model{strengths, {}};
    const std::vector<double> y0{0.75, sign * y3, 1.0, 0.0, 0.0, 0.0};
    const auto tr = integrate(model, y0, st);
    if (tr.status == run_status::step_underflow) {
      ++underflows;
      // it really is a near-collision: the final distances collapsed
      const auto& yf = tr.states.back();
      double dmin = 1e300;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          dmin = std::min(dmin, std::hypot(yf[2 * i] - yf[2 * j],
                                           yf[2 * i + 1] - yf[2 * j + 1]));
      REQUIRE(dmin < 1e-3);
      REQUIRE_FALSE(tr.events.empty());  // close-approach fired on the way in
      REQUIRE(tr.times.back() < st.t_end);
    } else {
      ++completions;
    }
  }
  REQUIRE(underflows == 1);
  REQUIRE(completions == 1);
}
