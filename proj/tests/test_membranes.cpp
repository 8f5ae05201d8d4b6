#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vortexlab/integrate.hpp"
#include "vortexlab/membranes.hpp"
#include "vortexlab/models.hpp"

using namespace vortexlab;

TEST_CASE("membrane rhs on hand-computed states") {
  {
    const auto [da, db] = membrane_rhs({1.0, 1.0, 1, 1});
    REQUIRE(da == -1.0);
    REQUIRE(db == 1.0);
  }
  {
    const auto [da, db] = membrane_rhs({1.0, 1.0, 1, 2});
    REQUIRE(da == -2.0);
    REQUIRE(db == 1.0);
  }
  // scaling: radii scaled by lambda scale the rhs by 1/lambda
  const auto [da, db] = membrane_rhs({0.5, 2.0, 3, 2});
  const auto [da2, db2] = membrane_rhs({1.5, 6.0, 3, 2});
  REQUIRE(da2 == Catch::Approx(da / 3.0).epsilon(1e-15));
  REQUIRE(db2 == Catch::Approx(db / 3.0).epsilon(1e-15));

  REQUIRE_THROWS_AS(membrane_rhs({-1.0, 1.0, 1, 1}), error);
  REQUIRE_THROWS_AS(membrane_rhs({1.0, 1.0, 0, 1}), error);
}

TEST_CASE("closed forms for equal and unequal dimensions") {
  for (double t : {0.0, 0.3, 1.7}) {
    const auto [a, b] = membrane_closed_form(1.0, 1.0, 1, 1, t);
    REQUIRE(a == Catch::Approx(std::exp(-t)).epsilon(1e-15));
    REQUIRE(b == Catch::Approx(std::exp(t)).epsilon(1e-15));
  }
  for (double t : {0.0, 0.25, 0.9}) {
    const auto [a, b] = membrane_closed_form(1.0, 1.0, 1, 2, t);
    REQUIRE(a == Catch::Approx((1.0 - t) * (1.0 - t)).epsilon(1e-13));
    REQUIRE(b == Catch::Approx(1.0 / (1.0 - t)).epsilon(1e-13));
  }
  {
    const auto [a0, b0] = membrane_closed_form(0.7, 1.3, 2, 1, 0.0);
    REQUIRE(a0 == Catch::Approx(0.7).epsilon(1e-15));
    REQUIRE(b0 == Catch::Approx(1.3).epsilon(1e-15));
  }

  // the closed form satisfies the ODE (finite differences in t)
  const double h = 1e-6;
  for (double t : {0.1, 0.5}) {
    const auto [a, b] = membrane_closed_form(1.0, 1.0, 1, 2, t);
    const auto [ap, bp] = membrane_closed_form(1.0, 1.0, 1, 2, t + h);
    const auto [am, bm] = membrane_closed_form(1.0, 1.0, 1, 2, t - h);
    REQUIRE((ap - am) / (2 * h) == Catch::Approx(-2.0 / b).epsilon(1e-8));
    REQUIRE((bp - bm) / (2 * h) == Catch::Approx(1.0 / a).epsilon(1e-8));
  }

  REQUIRE_THROWS_AS(membrane_closed_form(1.0, 1.0, 1, 2, 1.0), error);
  REQUIRE_THROWS_AS(membrane_closed_form(1.0, 1.0, 1, 2, 1.5), error);
}

TEST_CASE("collapse time") {
  const auto t12 = collapse_time(1.0, 1.0, 1, 2);
  REQUIRE(t12.has_value());
  REQUIRE(*t12 == 1.0);
  REQUIRE(collapse_time(2.0, 3.0, 1, 3) == 3.0);
  REQUIRE_FALSE(collapse_time(1.0, 1.0, 1, 1).has_value());
  REQUIRE_FALSE(collapse_time(1.0, 1.0, 2, 1).has_value());
  // m > l: a stays positive forever
  for (double t : {0.0, 5.0, 50.0}) {
    const auto [a, b] = membrane_closed_form(1.0, 1.0, 2, 1, t);
    REQUIRE(a == Catch::Approx(1.0 / (1.0 + t)).epsilon(1e-12));
    REQUIRE(a > 0.0);
  }
}

TEST_CASE("volume Hamiltonian is conserved") {
  REQUIRE(membrane_volume_invariant({1.0, 1.0, 3, 4}) == 0.0);

  // along the m=1, l=2 closed form a^m b^l stays exactly 1
  for (double t : {0.1, 0.5, 0.9}) {
    const auto [a, b] = membrane_closed_form(1.0, 1.0, 1, 2, t);
    REQUIRE(membrane_volume_invariant({a, b, 1, 2}) ==
            Catch::Approx(0.0).margin(1e-12));
  }

  // along a numerically integrated flow
  membrane_model model{1, 2};
  integrator_settings st;
  st.t_end = 2.0;
  st.sample_dt = 0.02;
  const auto tr = integrate(model, {1.0, 1.0}, st);
  for (std::size_t k = 0; k < tr.samples(); ++k) {
    if (tr.states[k][0] < 1e-3) break;
    REQUIRE(std::abs(tr.invariants[0][k]) < 1e-9);
  }
}

TEST_CASE("integration matches closed forms and is monotone") {
  struct Case { int m, l; double t_end; };
  for (const Case c : {Case{1, 1, 3.0}, Case{1, 2, 2.0}, Case{2, 1, 3.0}}) {
    membrane_model model{c.m, c.l};
    integrator_settings st;
    st.t_end = c.t_end;
    st.sample_dt = 0.01;
    const auto tr = integrate(model, {1.0, 1.0}, st);
    double prev_a = 2.0, prev_b = 0.0;
    for (std::size_t k = 0; k < tr.samples(); ++k) {
      const double a = tr.states[k][0], b = tr.states[k][1];
      REQUIRE(a < prev_a);
      REQUIRE(b > prev_b);
      prev_a = a;
      prev_b = b;
      if (a < 1e-3) break;
      const auto [ax, bx] = membrane_closed_form(1.0, 1.0, c.m, c.l, tr.times[k]);
      REQUIRE(std::abs(a - ax) / ax < 1e-8);
      REQUIRE(std::abs(b - bx) / bx < 1e-8);
    }
  }
}

TEST_CASE("collapse event is detected and extrapolated to t*") {
  membrane_model model{1, 2};
  integrator_settings st;
  st.t_end = 2.0;
  st.sample_dt = 0.05;
  const auto tr = integrate(model, {1.0, 1.0}, st);
  REQUIRE(tr.status == run_status::event_stop);
  REQUIRE(tr.events.size() == 1);
  REQUIRE(tr.events[0].kind == event_kind::collapse);
  REQUIRE(std::abs(tr.events[0].t - 1.0) < 1e-6);
}
