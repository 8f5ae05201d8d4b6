#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vortexlab/halfplane.hpp"
#include "vortexlab/integrate.hpp"
#include "vortexlab/models.hpp"
#include "support/oracles.hpp"

using namespace vortexlab;

namespace {

constexpr double pi = std::numbers::pi;

vortex_system half_pair(double g1, double g2, vec2 p1, vec2 p2) {
  return {{g1, g2}, {p1, p2}, domain_kind::half_plane, {}};
}

trajectory run_half(const vortex_system& s, double t_end, double dt = 0.1,
                    double rel_tol = 1e-10) {
  const auto model = half_plane_model::from_system(s);
  integrator_settings st;
  st.t_end = t_end;
  st.sample_dt = dt;
  st.rel_tol = rel_tol;
  return integrate(model, detail::pack_xy(s.positions), st);
}

}  // namespace

TEST_CASE("half-plane Hamiltonian on hand-computed states") {
  // single vortex: H = (1/2pi) G^2 log(2y)
  REQUIRE(hamiltonian_halfplane({{1.0}, {{3.0, 0.5}}, domain_kind::half_plane,
                                 {}}) == 0.0);
  REQUIRE(hamiltonian_halfplane({{1.0}, {{-2.0, std::exp(1.0) / 2}},
                                 domain_kind::half_plane, {}}) ==
          Catch::Approx(1.0 / (2 * pi)).epsilon(1e-15));
}

TEST_CASE("dipole Hamiltonian agrees with the reduced closed form") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> xc(-2.0, 2.0), yc(0.5, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const vec2 p1{xc(rng), yc(rng)}, p2{xc(rng), yc(rng)};
    if (norm(p1 - p2) < 0.1) continue;
    const auto s = half_pair(1.0, -1.0, p1, p2);
    const double xr = p1.x - p2.x, yr = p1.y - p2.y;
    const double y0 = 0.5 * (p1.y + p2.y);
    const double closed =
        std::log((4 * y0 * y0 - yr * yr) * (xr * xr + yr * yr) /
                 (xr * xr + 4 * y0 * y0)) /
        (2 * pi);
    REQUIRE(hamiltonian_halfplane(s) ==
            Catch::Approx(closed).epsilon(1e-12).margin(1e-13));
  }
}

TEST_CASE("single half-plane vortex slides along the wall") {
  const auto v = velocity_halfplane({{1.0}, {{0.7, 2.0}},
                                     domain_kind::half_plane, {}});
  REQUIRE(v[0].x == Catch::Approx(1.0 / (2 * pi * 2.0)).epsilon(1e-15));
  REQUIRE(v[0].y == 0.0);

  // the Green-function normalization halves the speed
  const auto vg = velocity_halfplane({{1.0}, {{0.7, 2.0}},
                                      domain_kind::half_plane, {}},
                                     half_plane_normalization::greens);
  REQUIRE(vg[0].x == Catch::Approx(0.5 * v[0].x).epsilon(1e-15));

  const auto sol = single_vortex_halfplane_solution(1.0, -0.3, 1.0, 2 * pi);
  REQUIRE(sol.x == Catch::Approx(-0.3 + 1.0).epsilon(1e-15));
  REQUIRE(sol.y == 1.0);
  REQUIRE(single_vortex_halfplane_solution(1.0, -0.3, 1.0, 0.0).x == -0.3);
  const auto rev = single_vortex_halfplane_solution(-1.0, -0.3, 1.0, 2 * pi);
  REQUIRE(rev.x == Catch::Approx(-0.3 - 1.0).epsilon(1e-15));
}

TEST_CASE("parity of the half-plane velocity field") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = oracles::random_half_plane_system(rng, 3, false);
    const auto v = velocity_halfplane(s);

    // x -> -x alone preserves dx/dt and negates dy/dt
    auto mirrored = s;
    for (auto& p : mirrored.positions) p.x = -p.x;
    const auto vm = velocity_halfplane(mirrored);
    for (std::size_t i = 0; i < s.size(); ++i) {
      REQUIRE(vm[i].x == Catch::Approx(v[i].x).margin(1e-14));
      REQUIRE(vm[i].y == Catch::Approx(-v[i].y).margin(1e-14));
    }

    // flipping the strengths as well negates dx/dt and preserves dy/dt
    auto conjugated = mirrored;
    for (auto& g : conjugated.strengths) g = -g;
    const auto vc = velocity_halfplane(conjugated);
    for (std::size_t i = 0; i < s.size(); ++i) {
      REQUIRE(vc[i].x == Catch::Approx(-v[i].x).margin(1e-14));
      REQUIRE(vc[i].y == Catch::Approx(v[i].y).margin(1e-14));
    }
  }
}

TEST_CASE("half-plane gradient matches finite differences") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = oracles::random_half_plane_system(rng, 3, false);
    const auto analytic = hamiltonian_halfplane_gradient(s);
    const auto fd = oracles::fd_position_gradient(
        [](const vortex_system& q) { return hamiltonian_halfplane(q); }, s,
        1e-6);
    REQUIRE(oracles::max_gradient_mismatch(analytic, fd) < 1e-6);

    const auto v = velocity_halfplane(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      REQUIRE(s.strengths[i] * v[i].x ==
              Catch::Approx(analytic[i].y).margin(1e-13));
      REQUIRE(s.strengths[i] * v[i].y ==
              Catch::Approx(-analytic[i].x).margin(1e-13));
    }
  }
}

TEST_CASE("greens normalization halves Hamiltonian and flow") {
  std::mt19937_64 rng(31);
  const auto s = oracles::random_half_plane_system(rng, 3, false);
  REQUIRE(hamiltonian_halfplane(s, half_plane_normalization::greens) ==
          Catch::Approx(0.5 * hamiltonian_halfplane(s)).epsilon(1e-15));
  const auto v1 = velocity_halfplane(s);
  const auto v2 = velocity_halfplane(s, half_plane_normalization::greens);
  for (std::size_t i = 0; i < s.size(); ++i) {
    REQUIRE(v2[i].x == Catch::Approx(0.5 * v1[i].x).margin(1e-16));
    REQUIRE(v2[i].y == Catch::Approx(0.5 * v1[i].y).margin(1e-16));
  }
}

TEST_CASE("tracer advection is the zero-strength limit") {
  std::mt19937_64 rng(37);
  const auto base = oracles::random_half_plane_system(rng, 2);
  auto with_tracer = base;
  with_tracer.strengths.push_back(0.0);
  with_tracer.positions.push_back({0.4, 1.7});
  with_tracer.tracer = {false, false, true};
  const auto v = velocity_halfplane(with_tracer);

  auto with_small = base;
  with_small.strengths.push_back(1e-9);
  with_small.positions.push_back({0.4, 1.7});
  const auto vs = velocity_halfplane(with_small);
  REQUIRE(v[2].x == Catch::Approx(vs[2].x).margin(1e-8));
  REQUIRE(v[2].y == Catch::Approx(vs[2].y).margin(1e-8));

  // the tracer does not disturb the pair
  const auto v_pair = velocity_halfplane(base);
  REQUIRE(v[0].x == v_pair[0].x);
  REQUIRE(v[1].y == v_pair[1].y);
}

TEST_CASE("conserved height picks the right reduced coordinate") {
  REQUIRE(conserved_height(half_pair(1.0, 1.0, {0.0, 1.0}, {1.0, 3.0})) == 2.0);
  REQUIRE(conserved_height(half_pair(1.0, -1.0, {0.0, 2.0}, {1.0, 0.5})) == 1.5);
  REQUIRE(conserved_height(half_pair(2.0, 1.0, {0.0, 1.0}, {1.0, 4.0})) == 2.0);
}

TEST_CASE("generic orbit equation holds along integrated trajectories") {
  const auto s = half_pair(1.0, 2.0, {0.0, 1.0}, {0.8, 1.6});
  const auto p = generic_orbit_params::from_system(s);

  // parameters are defined from this state, so the residual starts at zero
  REQUIRE(orbit_residual_generic(s.positions[0].x - s.positions[1].x,
                                 s.positions[0].y - s.positions[1].y, p) == 0.0);

  // E follows the reduced-space convention: offset from the Hamiltonian by
  // (G1^2+G2^2) log(2) / (2 pi)
  const double offset = (1.0 + 4.0) * std::log(2.0) / (2 * pi);
  REQUIRE(p.energy ==
          Catch::Approx(hamiltonian_halfplane(s) - offset).epsilon(1e-12));

  const auto tr = run_half(s, 30.0);
  REQUIRE(tr.status == run_status::completed);
  double worst = 0.0;
  for (const auto& y : tr.states) {
    const double res = orbit_residual_generic(y[0] - y[2], y[1] - y[3], p);
    worst = std::max(worst, std::abs(res) / p.level);
  }
  REQUIRE(worst < 1e-6);
}

TEST_CASE("generic orbit equation is symmetric for equal strengths") {
  generic_orbit_params p;
  p.gamma1 = p.gamma2 = 1.0;
  p.mu = 2.0;
  p.level = generic_orbit_lhs(0.7, 0.4, p);
  for (double xr : {0.1, 0.7, 1.3})
    for (double yr : {0.2, 0.5, 1.1})
      REQUIRE(orbit_residual_generic(xr, yr, p) ==
              Catch::Approx(orbit_residual_generic(xr, -yr, p)).margin(1e-14));
}

TEST_CASE("generic orbit equation rejects non-positive heights") {
  generic_orbit_params p;
  p.gamma1 = 1.0;
  p.gamma2 = 1.0;
  p.mu = 1.0;
  p.level = 1.0;
  REQUIRE_THROWS_AS(orbit_residual_generic(0.5, 2.5, p), error);
}

TEST_CASE("dipole orbit equation: hand algebra and integration") {
  {
    // nu = 1, C = 2: at x_r = 0, y0 = 1/sqrt(2): 1/1 + 1/(2 - 1) = 2
    dipole_orbit_params p;
    p.nu = 1.0;
    p.level = 2.0;
    p.energy = -std::log(2.0) / (2 * pi);
    REQUIRE(orbit_residual_dipole(0.0, 1.0 / std::sqrt(2.0), p) ==
            Catch::Approx(0.0).margin(1e-14));
    REQUIRE_THROWS_AS(orbit_residual_dipole(0.3, 0.5, p), error);  // 4y0^2 = nu^2
  }

  const auto s = half_pair(1.0, -1.0, {0.15, 3.0}, {-0.15, 1.0});
  const auto p = dipole_orbit_params::from_system(s);
  REQUIRE(p.nu == 2.0);
  REQUIRE(p.energy == Catch::Approx(hamiltonian_halfplane(s)).epsilon(1e-14));
  REQUIRE(orbit_residual_dipole(0.3, 2.0, p) == Catch::Approx(0.0).margin(1e-12));

  const auto tr = run_half(s, 40.0);
  REQUIRE(tr.status == run_status::completed);
  double worst = 0.0;
  for (const auto& y : tr.states) {
    const double res =
        orbit_residual_dipole(y[0] - y[2], 0.5 * (y[1] + y[3]), p);
    worst = std::max(worst, std::abs(res) / p.level);
  }
  REQUIRE(worst < 1e-6);
}

TEST_CASE("reachability of x_r = 0 from the level constant") {
  dipole_orbit_params p;
  p.nu = 1.0;
  p.level = 2.0;
  auto r = reachability_x_r_zero(p);
  REQUIRE(r.reachable);
  REQUIRE(r.four_y0_squared == Catch::Approx(2.0).epsilon(1e-15));

  p.level = 1.0;  // boundary case C = 1/nu^2
  REQUIRE_FALSE(reachability_x_r_zero(p).reachable);

  p.nu = 2.0;
  p.level = 10.0;
  REQUIRE(reachability_x_r_zero(p).reachable);

  p.nu = 0.0;
  REQUIRE_THROWS_AS(reachability_x_r_zero(p), error);
}

TEST_CASE("non-collision monitors along two-vortex runs") {
  // same-sign pair and a dipole: heights and separations stay bounded away
  // from zero over the horizon
  for (const auto& s :
       {half_pair(1.0, 2.0, {0.0, 1.2}, {1.0, 2.0}),
        half_pair(1.0, -1.0, {-0.5, 1.2}, {0.5, 1.0})}) {
    const auto tr = run_half(s, 50.0);
    REQUIRE(tr.status == run_status::completed);
    double min_y = 1e300, min_l = 1e300;
    for (const auto& y : tr.states) {
      min_y = std::min({min_y, y[1], y[3]});
      min_l = std::min(min_l, std::hypot(y[0] - y[2], y[1] - y[3]));
    }
    REQUIRE(min_y > 1e-6);
    REQUIRE(min_l > 1e-6);

    // conserved height drift stays tiny
    const auto rep = monitor_invariants(tr, 1e-10);
    bool found = false;
    for (const auto& item : rep.items)
      if (item.name == "y0" || item.name == "yr") {
        REQUIRE(item.max_abs_drift < 1e-10);
        found = true;
      }
    REQUIRE(found);
  }
}

// --- restricted three-vortex system --------------------------------------

TEST_CASE("restricted3 Hamiltonian values and symmetries") {
  restricted3_state st{0.0, 0.0, 0.0, restricted3_default_omega0};
  REQUIRE(restricted3_hamiltonian(st, 0.0) == 0.0);
  REQUIRE(restricted3_h0(0.0, 0.0) == 0.0);

  for (double x : {0.3, 1.1})
    for (double y : {0.2, 0.6}) {
      REQUIRE(restricted3_h0(x, y) == Catch::Approx(restricted3_h0(-x, y)).margin(1e-15));
      REQUIRE(restricted3_h0(x, y) == Catch::Approx(restricted3_h0(x, -y)).margin(1e-15));
    }

  // at t = 0 the perturbation reduces to -eps (5/4pi) y
  restricted3_state pert{0.4, 0.3, 0.02, restricted3_default_omega0};
  const double h = restricted3_hamiltonian(pert, 0.0);
  const double h0 = restricted3_h0(0.4, 0.3);
  REQUIRE(h - h0 == Catch::Approx(-0.02 * 5.0 / (4 * pi) * 0.3).epsilon(1e-13));

  REQUIRE_THROWS_AS(restricted3_h0(0.0, 1.0), error);
}

TEST_CASE("restricted3 velocity: stagnation and finite differences") {
  restricted3_state origin{0.0, 0.0, 0.0, restricted3_default_omega0};
  const vec2 v0 = restricted3_velocity(origin, 0.0);
  REQUIRE(v0.x == 0.0);
  REQUIRE(v0.y == 0.0);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> c(-1.5, 1.5), ts(0.0, 50.0);
  for (int trial = 0; trial < 40; ++trial) {
    restricted3_state st{c(rng), c(rng), 0.01, restricted3_default_omega0};
    if (std::hypot(st.x, st.y - 1) < 0.2 || std::hypot(st.x, st.y + 1) < 0.2)
      continue;
    const double t = ts(rng);
    const vec2 g = restricted3_gradient(st, t);
    const double h = 1e-6;
    auto at = [&](double x, double y) {
      restricted3_state q = st;
      q.x = x;
      q.y = y;
      return restricted3_hamiltonian(q, t);
    };
    const double fx = (at(st.x + h, st.y) - at(st.x - h, st.y)) / (2 * h);
    const double fy = (at(st.x, st.y + h) - at(st.x, st.y - h)) / (2 * h);
    const double scale = std::max({std::abs(g.x), std::abs(g.y), 1.0});
    REQUIRE(std::abs(g.x - fx) / scale < 1e-6);
    REQUIRE(std::abs(g.y - fy) / scale < 1e-6);

    const vec2 v = restricted3_velocity(st, t);
    REQUIRE(v.x == g.y);
    REQUIRE(v.y == -g.x);
  }
}

TEST_CASE("restricted3 at eps = 0 conserves H0 along orbits") {
  const auto model = restricted3_model{0.0, restricted3_default_omega0};
  integrator_settings st;
  st.t_end = 100.0;
  st.sample_dt = 1.0;
  st.rel_tol = 1e-11;
  const auto tr = integrate(model, {0.8, 0.4}, st);
  REQUIRE(tr.status == run_status::completed);
  const auto rep = monitor_invariants(tr, 1e-8);
  REQUIRE(rep.items[0].name == "H0");
  REQUIRE(rep.items[0].max_abs_drift < 1e-8);
}
