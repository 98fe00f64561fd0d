#include <cmath>
#include <numbers>
#include <sstream>

#include "axns/initdata.hpp"
#include "axns/invariants.hpp"
#include "axns/solver.hpp"
#include "doctest.h"

using namespace axns;

namespace {

SnapshotHistory lamb_oseen_history(int n, double gamma, std::initializer_list<double> times) {
  const Grid g = make_grid(n, n, 4.0, -2.0, 2.0);
  SnapshotHistory h(16);
  for (double t : times) {
    h.push(t, lamb_oseen_field(gamma, 1.0, t, g), lamb_oseen_pressure_field(gamma, 1.0, t, g));
  }
  return h;
}

SnapshotHistory swirl_history(std::initializer_list<double> amplitudes) {
  const Grid g = make_grid(16, 16, 1.0, -0.5, 0.5);
  SnapshotHistory h(16);
  double t = 0.0;
  for (double a : amplitudes) {
    AxisymField u(g);
    for (int i = 1; i <= g.nr; ++i) {
      for (int j = 0; j <= g.nz; ++j) u.vtheta(i, j) = a * g.r(i) * std::exp(-g.r(i) * g.r(i));
    }
    h.push(t, u, ScalarField(g, ScalarRole::Pressure));
    t += 0.1;
  }
  return h;
}

const CheckRow& row(const InvariantReport& r, const std::string& name) {
  for (const CheckRow& c : r.rows) {
    if (c.check == name) return c;
  }
  throw std::runtime_error("no row " + name);
}

}  // namespace

TEST_CASE("config validation") {
  InvariantConfig c;
  CHECK_NOTHROW(c.validate());
  c.h0 = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.h0.reset();
  c.energy_step_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.energy_step_tol = 1e-8;
  c.refinement = {64, 100};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("rows carry value, bounds and margin") {
  const CheckRow a = make_row("x", 0.25, 0.0, 1.0);
  CHECK(a.pass);
  CHECK(a.margin() == doctest::Approx(0.25));
  const CheckRow b = make_row("x", 1.5, 0.0, 1.0);
  CHECK_FALSE(b.pass);
  CHECK(b.margin() == doctest::Approx(-0.5));
}

TEST_CASE("zero flow passes every check") {
  const Grid g = make_grid(16, 16, 1.0, -0.5, 0.5);
  SolverConfig c;
  c.t_end = 0.01;
  const SnapshotHistory h = simulate(AxisymField(g), c, 64);
  const InvariantReport r = check_all(h, 1.0, 1.0);
  CHECK(r.pass());
  CHECK(row(r, "max_principle.sup_rvtheta").value == 0.0);
  CHECK(row(r, "short_time.sup_speed").value == 0.0);
  CHECK(row(r, "short_time.h0").value == doctest::Approx(0.01));
  CHECK(row(r, "divergence.sup").value == 0.0);
  CHECK(row(r, "scaling.residual_ratio").pass);
}

TEST_CASE("Lamb-Oseen satisfies the maximum principle with its closed-form sup") {
  const double gamma = 1.0;
  const SnapshotHistory h = lamb_oseen_history(32, gamma, {0.1, 0.2, 0.3, 0.4});
  const double n0 = gamma / (2.0 * std::numbers::pi);
  const InvariantReport r = check_max_principle(h, n0);
  CHECK(r.pass());
  // Attained at the outermost node r = 4.
  const double at_edge = n0 * (1.0 - std::exp(-16.0 / (4.0 * 0.1)));
  CHECK(row(r, "max_principle.sup_rvtheta").value == doctest::Approx(at_edge).epsilon(1e-12));
  CHECK(row(r, "max_principle.step_increase").value == 0.0);
}

TEST_CASE("growing swirl violates the maximum principle") {
  const SnapshotHistory h = swirl_history({1.0, 1.0, 1.001});
  const InvariantReport r = check_max_principle(h, 10.0);
  CHECK_FALSE(r.pass());
  CHECK(row(r, "max_principle.sup_rvtheta").pass);
  CHECK(row(r, "max_principle.step_increase").value == doctest::Approx(1e-3));
  CHECK_FALSE(check_max_principle(swirl_history({2.0}), 0.1).pass());
}

TEST_CASE("short-time bound and empirical horizon") {
  // Peak speed a e^{-1/2} / sqrt(2) for a r exp(-r^2), sampled on the grid.
  const SnapshotHistory h = swirl_history({1.0, 2.0, 4.0, 8.0, 2.0});
  const double q1 = max_speed(h[0].field).value;
  const double n0 = 2.0 * q1;  // bound 2 N0 = 4 q1 admits amplitudes up to 4
  CHECK(empirical_h0(h, n0) == doctest::Approx(0.2));
  const InvariantReport r = check_short_time_bound(h, n0);
  CHECK(r.pass());
  CHECK(row(r, "short_time.h0").value == doctest::Approx(0.2));
  InvariantConfig c;
  c.h0 = 0.35;
  CHECK_FALSE(check_short_time_bound(h, n0, c).pass());
  // Violated from the start: the horizon is zero and the row fails.
  const InvariantReport z = check_short_time_bound(h, 0.1 * q1);
  CHECK_FALSE(row(z, "short_time.h0").pass);
}

TEST_CASE("energy check") {
  CHECK(check_energy(lamb_oseen_history(32, 1.0, {0.1, 0.2, 0.3})).pass());
  const InvariantReport r = check_energy(swirl_history({1.0, 1.0 + 1e-6}));
  CHECK_FALSE(r.pass());
  CHECK(row(r, "energy.step_increase").value == doctest::Approx(2e-6).epsilon(1e-3));
}

TEST_CASE("scale_history maps grid, times and values") {
  const SnapshotHistory h = lamb_oseen_history(16, 1.0, {0.1, 0.2, 0.4});
  const SnapshotHistory s = scale_history(h, 2.0);
  CHECK(s.grid().r_max == 2.0);
  CHECK(s.grid().z_min == -1.0);
  CHECK(s.grid().nr == 16);
  CHECK(s[2].t == doctest::Approx(0.1));
  CHECK(s[1].field.vtheta(5, 3) == 2.0 * h[1].field.vtheta(5, 3));
  CHECK(s[1].pressure(5, 3) == 4.0 * h[1].pressure(5, 3));
  // The scaled Lamb-Oseen history is Lamb-Oseen again at the scaled time.
  const AxisymField exact = lamb_oseen_field(1.0, 1.0, 0.05, s.grid());
  for (int i = 0; i <= 16; ++i) {
    CHECK(s[1].field.vtheta(i, 4) == doctest::Approx(exact.vtheta(i, 4)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(scale_history(h, 0.0), std::invalid_argument);
}

TEST_CASE("scaling covariance") {
  const SnapshotHistory h = lamb_oseen_history(32, 1.0, {0.1, 0.10001, 0.10002});
  SUBCASE("lambda = 1 is the identity") {
    const InvariantReport r = check_scaling_covariance(h, 1.0);
    CHECK(row(r, "scaling.rspeed_change").value == 0.0);
    CHECK(row(r, "scaling.residual_ratio").value == 1.0);
  }
  SUBCASE("lambda = 2 scales the residual by 8") {
    const InvariantReport r = check_scaling_covariance(h, 2.0);
    CHECK(r.pass());
    CHECK(row(r, "scaling.residual_ratio").value == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(row(r, "scaling.rspeed_change").value < 1e-12);
  }
  SUBCASE("constant axial flow keeps max r|v|") {
    const Grid g = make_grid(16, 16, 1.0, -0.5, 0.5);
    SnapshotHistory c(4);
    for (double t : {0.0, 0.1, 0.2}) {
      AxisymField u(g);
      for (double& v : u.vz.values()) v = 3.0;
      c.push(t, u, ScalarField(g, ScalarRole::Pressure));
    }
    const SnapshotHistory s = scale_history(c, 3.0);
    CHECK(s[0].field.vz(4, 4) == 9.0);
    CHECK(check_scaling_covariance(c, 3.0).pass());
  }
  CHECK_THROWS_AS(check_scaling_covariance(lamb_oseen_history(16, 1.0, {0.1, 0.2}), 2.0),
                  std::invalid_argument);
}

TEST_CASE("divergence check") {
  DataSpec spec;
  spec.kind = DataKind::StreamRandom;
  const Grid g = make_grid(32, 32, 2.0, -1.0, 1.0);
  SolverConfig c;
  c.t_end = 0.002;
  const SnapshotHistory run = simulate(generate(spec, g), c, 16);
  CHECK(check_divergence(run).pass());
  // Stream-function data before projection is only divergence-free to O(h^2).
  SnapshotHistory raw(2);
  raw.push(0.0, generate(spec, g), ScalarField(g));
  const InvariantReport r = check_divergence(raw);
  CHECK_FALSE(r.pass());
  CHECK(row(r, "divergence.sup").value > 1e-6);
}

TEST_CASE("csv output") {
  InvariantReport r;
  r.rows.push_back(make_row("a", 0.1, 0.0, 1.0));
  r.rows.push_back(make_row("b", 2.0, 0.0, 1.0));
  std::ostringstream out;
  write_invariants_csv(out, r);
  CHECK(out.str() == "check,value,lower,upper,margin,pass\na,0.1,0,1,0.1,1\nb,2,0,1,-1,0\n");
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -2.5e-300}) CHECK(std::stod(format_double(v)) == v);
}
