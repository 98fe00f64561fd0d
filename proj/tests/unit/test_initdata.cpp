#include <cmath>
#include <numbers>

#include "axns/field_ops.hpp"
#include "axns/initdata.hpp"
#include "doctest.h"

using namespace axns;

namespace {

DataSpec ring_spec() {
  DataSpec s;
  s.kind = DataKind::VortexRingSwirl;
  s.amplitude = 1.0;
  s.ring_radius = 1.0;
  s.core_radius = 0.25;
  s.swirl = 0.5;
  s.N0 = 1.0;
  return s;
}

}  // namespace

TEST_CASE("Lamb-Oseen limits") {
  const double gamma = 1.0, nu = 1.0, t = 0.01;
  CHECK(lamb_oseen_vtheta(0.0, gamma, nu, t) == 0.0);
  const double r = 1e-5;
  CHECK(lamb_oseen_vtheta(r, gamma, nu, t) / r ==
        doctest::Approx(gamma / (8.0 * std::numbers::pi * nu * t)).epsilon(1e-6));
  const double far = 50.0;
  CHECK(far * lamb_oseen_vtheta(far, gamma, nu, t) ==
        doctest::Approx(gamma / (2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("Lamb-Oseen peak from a 1D scan") {
  const double nut = 0.01;
  double best = 0.0, best_r = 0.0;
  for (int k = 1; k <= 200000; ++k) {
    const double r = k * 2.5e-6;
    const double v = 1.0 / (2.0 * std::numbers::pi * r) * (1.0 - std::exp(-r * r / (4.0 * nut)));
    if (v > best) {
      best = v;
      best_r = r;
    }
  }
  const Grid g = make_grid(2000, 8, 0.5, -0.1, 0.1);
  const AxisymField u = lamb_oseen_field(1.0, 1.0, nut, g);
  const NodeMax m = max_speed(u);
  CHECK(m.value == doctest::Approx(best).epsilon(1e-6));
  CHECK(std::abs(m.r - best_r) <= g.dr);
}

TEST_CASE("Lamb-Oseen pressure balances the centrifugal force") {
  const double gamma = 1.3, nu = 1.0, t = 0.1;
  for (double r : {0.05, 0.3, 0.7, 1.5, 3.0}) {
    const double h = 1e-4;
    const double dpdr = (lamb_oseen_pressure(r + h, gamma, nu, t) -
                         lamb_oseen_pressure(r - h, gamma, nu, t)) / (2.0 * h);
    const double v = lamb_oseen_vtheta(r, gamma, nu, t);
    CHECK(dpdr == doctest::Approx(v * v / r).epsilon(1e-6));
  }
  // Far away the vortex is irrotational: p = -gamma^2 / (8 pi^2 r^2).
  const double r = 20.0;
  CHECK(lamb_oseen_pressure(r, gamma, nu, t) ==
        doctest::Approx(-gamma * gamma / (8.0 * std::numbers::pi * std::numbers::pi * r * r))
            .epsilon(1e-10));
}

TEST_CASE("vortex ring satisfies the N0 bounds and is divergence-free") {
  const DataSpec s = ring_spec();
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const Grid g = make_grid(n, n, 2.5, -1.25, 1.25);
    const AxisymField u = vortex_ring_swirl(s, g);
    const N0Report rep = check_n0_bounds(u, s.N0);
    CHECK(rep.pass);
    CHECK(rep.sup_speed <= s.N0);
    CHECK(rep.l2 <= s.N0);
    CHECK(rep.sup_rspeed <= s.N0);
    const double d = max_divergence(u);
    if (prev > 0.0) {
      CHECK(prev / d > 3.5);
      CHECK(prev / d < 4.5);
    }
    prev = d;
  }
}

TEST_CASE("vortex ring without swirl and precondition") {
  DataSpec s = ring_spec();
  s.swirl = 0.0;
  const Grid g = make_grid(32, 32, 2.5, -1.25, 1.25);
  const AxisymField u = vortex_ring_swirl(s, g);
  for (double v : u.vtheta.values()) CHECK(v == 0.0);
  s.ring_radius = 0.7;
  CHECK_THROWS_AS(vortex_ring_swirl(s, g), std::invalid_argument);
}

TEST_CASE("check_n0_bounds") {
  const Grid g = make_grid(16, 16, 2.0, -1.0, 1.0);
  const N0Report zero = check_n0_bounds(AxisymField(g), 1.0);
  CHECK(zero.sup_speed == 0.0);
  CHECK(zero.l2 == 0.0);
  CHECK(zero.sup_rspeed == 0.0);
  CHECK(zero.pass);
  AxisymField u(g);
  for (int i = 0; i <= g.nr; ++i) {
    const double r = g.r(i);
    for (int j = 0; j <= g.nz; ++j) u.vtheta(i, j) = r >= 0.5 ? 2.0 / r : 8.0 * r;
  }
  const N0Report rep = check_n0_bounds(u, 1.0);
  CHECK(rep.sup_rspeed == doctest::Approx(2.0));
  CHECK(rep.sup_rvtheta == doctest::Approx(2.0));
  CHECK_FALSE(rep.pass);
}

TEST_CASE("generators are deterministic") {
  const Grid g = make_grid(24, 32, 2.0, -1.0, 1.0);
  DataSpec s;
  s.kind = DataKind::StreamRandom;
  s.seed = 42;
  s.modes = 5;
  const AxisymField a = generate(s, g), b = generate(s, g);
  CHECK(a == b);
  s.seed = 43;
  CHECK_FALSE(generate(s, g) == a);
  CHECK(check_n0_bounds(a, s.N0).pass);
  CHECK(generate(ring_spec(), g) == generate(ring_spec(), g));
}

TEST_CASE("random stream-function data is divergence-free at second order") {
  DataSpec s;
  s.kind = DataKind::StreamRandom;
  s.seed = 9;
  s.modes = 3;
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const double d = max_divergence(stream_random(s, make_grid(n, n, 2.0, -1.0, 1.0)));
    if (prev > 0.0) {
      CHECK(prev / d > 3.5);
      CHECK(prev / d < 4.5);
    }
    prev = d;
  }
}

TEST_CASE("data kind names") {
  for (DataKind k : {DataKind::LambOseen, DataKind::VortexRingSwirl, DataKind::StreamRandom}) {
    CHECK(parse_data_kind(to_string(k)) == k);
  }
  CHECK(parse_data_kind("vortex_ring") == DataKind::VortexRingSwirl);
  CHECK_THROWS_AS(parse_data_kind("vortex"), std::invalid_argument);
}
