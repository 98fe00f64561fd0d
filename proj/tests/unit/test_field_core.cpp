#include <cmath>
#include <numbers>
#include <random>

#include "axns/field_ops.hpp"
#include "doctest.h"

using namespace axns;

namespace {

// Meridional field generated by the stream function psi = r^2 exp(-r^2 - z^2).
AxisymField stream_field(int n) {
  const Grid g = make_grid(n, n, 3.0, -1.5, 1.5);
  AxisymField u(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) {
      const double r = g.r(i), z = g.z(j);
      const double e = std::exp(-r * r - z * z);
      u.vr(i, j) = 2.0 * r * z * e;
      u.vz(i, j) = (2.0 - 2.0 * r * r) * e;
    }
  }
  return u;
}

double lamb_oseen(double r, double gamma, double nut) {
  if (r == 0.0) return 0.0;
  return gamma / (2.0 * std::numbers::pi * r) * -std::expm1(-r * r / (4.0 * nut));
}

}  // namespace

TEST_CASE("make_grid spacing and preconditions") {
  const Grid a = make_grid(8, 8, 1.0, -0.5, 0.5);
  CHECK(a.dr == 0.125);
  CHECK(a.dz == 0.125);
  CHECK(a.r(0) == 0.0);
  const Grid b = make_grid(256, 256, 4.0, -4.0, 4.0);
  CHECK(b.dr == 0.015625);
  CHECK(b.dz == 0.03125);
  CHECK_THROWS_AS(make_grid(4, 8, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 8, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 8, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("apply_axis_conditions") {
  const Grid g = make_grid(8, 8, 1.0, -0.5, 0.5);
  AxisymField u(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) {
      u.vr(i, j) = 0.3;
      u.vtheta(i, j) = 2.0 * g.r(i);
      u.vz(i, j) = g.z(j) * g.z(j);
    }
  }
  const AxisymField v = apply_axis_conditions(u);
  for (int j = 0; j <= g.nz; ++j) {
    CHECK(v.vr(0, j) == 0.0);
    CHECK(v.vtheta(0, j) == 0.0);
    CHECK(v.vz(0, j) == doctest::Approx(g.z(j) * g.z(j)).epsilon(1e-14));
    const double one_sided = -3.0 * v.vz(0, j) + 4.0 * v.vz(1, j) - v.vz(2, j);
    CHECK(std::abs(one_sided) < 1e-14);
  }
  for (int i = 1; i <= g.nr; ++i) CHECK(v.vr(i, 3) == 0.3);
}

TEST_CASE("divergence exact cases") {
  const Grid g = make_grid(16, 16, 2.0, -1.0, 1.0);
  AxisymField u(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) u.vz(i, j) = 1.7;
  }
  const ScalarField d0 = divergence(u);
  for (double v : d0.values.values()) CHECK(v == 0.0);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) {
      u.vr(i, j) = g.r(i);
      u.vz(i, j) = -2.0 * g.z(j);
    }
  }
  const ScalarField d1 = divergence(u);
  for (double v : d1.values.values()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("divergence of a stream-function field is second order") {
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const double m = max_divergence(stream_field(n));
    if (prev > 0.0) {
      const double ratio = prev / m;
      CHECK(ratio > 3.5);
      CHECK(ratio < 4.5);
    }
    prev = m;
  }
}

TEST_CASE("reconstruct_cartesian frames") {
  const Grid g = make_grid(16, 16, 2.0, -1.0, 1.0);
  const double omega = 1.5;
  AxisymField u(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) u.vtheta(i, j) = omega * g.r(i);
  }
  const Vec3 a = reconstruct_cartesian(u, {1.0, 0.0, 0.0});
  CHECK(a[0] == doctest::Approx(0.0));
  CHECK(a[1] == doctest::Approx(omega));
  CHECK(a[2] == 0.0);
  const Vec3 b = reconstruct_cartesian(u, {0.0, 1.0, 0.0});
  CHECK(b[0] == doctest::Approx(-omega));
  CHECK(b[1] == doctest::Approx(0.0).epsilon(1e-14));

  AxisymField w(g);
  for (double& v : w.vz.values()) v = 0.7;
  for (const Vec3& x : {Vec3{0.0, 0.0, 0.0}, Vec3{0.3, -1.1, 0.9}, Vec3{1.2, 1.2, -0.4}}) {
    for (auto scheme : {Interpolation::Bilinear, Interpolation::Cubic}) {
      const Vec3 v = reconstruct_cartesian(w, x, scheme);
      CHECK(v[0] == 0.0);
      CHECK(v[1] == 0.0);
      CHECK(v[2] == doctest::Approx(0.7).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS(reconstruct_cartesian(w, {2.0, 0.5, 0.0}), OutOfDomainError);
  CHECK_THROWS_AS(reconstruct_cartesian(w, {0.5, 0.0, 1.2}), OutOfDomainError);
}

TEST_CASE("frame orthonormality on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int k = 0; k < 10000; ++k) {
    const Vec3 x{d(rng), d(rng), d(rng)};
    if (std::hypot(x[0], x[1]) <= 1e-6) continue;
    const CylindricalFrame f = CylindricalFrame::at(x);
    const Vec3 e[3] = {f.e_r, f.e_theta, f.e_z};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        REQUIRE(std::abs(dot(e[a], e[b]) - (a == b ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("reconstruction is rotation invariant in magnitude") {
  const AxisymField u = [] {
    AxisymField f = stream_field(32);
    for (int i = 0; i <= f.grid.nr; ++i) {
      for (int j = 0; j <= f.grid.nz; ++j) f.vtheta(i, j) = f.grid.r(i) * std::exp(-f.grid.z(j));
    }
    return f;
  }();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rr(0.0, 2.5), zz(-1.4, 1.4), th(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < 500; ++k) {
    const double r = rr(rng), z = zz(rng), a = th(rng);
    const Vec3 v0 = reconstruct_cartesian(u, {r, 0.0, z});
    const Vec3 v1 = reconstruct_cartesian(u, {r * std::cos(a), r * std::sin(a), z});
    REQUIRE(norm(v1) == doctest::Approx(norm(v0)).epsilon(1e-12));
    // The rotated vector is the original rotated by a.
    CHECK(v1[0] == doctest::Approx(std::cos(a) * v0[0] - std::sin(a) * v0[1]).epsilon(1e-10));
  }
}

TEST_CASE("max_speed scans and tie-break") {
  const Grid g = make_grid(16, 16, 2.0, -1.0, 1.0);
  AxisymField zero(g);
  const NodeMax m0 = max_speed(zero);
  CHECK(m0.value == 0.0);
  CHECK(m0.r == 0.0);
  CHECK(m0.z == g.z_min);

  AxisymField rot(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) rot.vtheta(i, j) = 0.5 * g.r(i);
  }
  const NodeMax m1 = max_speed(rot);
  CHECK(m1.value == doctest::Approx(0.5 * g.r_max));
  CHECK(m1.r == g.r_max);
  CHECK(m1.z == g.z_min);
  CHECK(max_speed(rot).i == m1.i);
  CHECK(max_speed(rot).j == m1.j);
}

TEST_CASE("max_speed of Lamb-Oseen matches a fine 1D scan") {
  const double nut = 0.01;
  const Grid g = make_grid(512, 16, 1.0, -0.5, 0.5);
  AxisymField u(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) u.vtheta(i, j) = lamb_oseen(g.r(i), 1.0, nut);
  }
  double best = 0.0, best_r = 0.0;
  for (int k = 1; k <= 1000000; ++k) {
    const double r = k * 1e-6;
    const double v = lamb_oseen(r, 1.0, nut);
    if (v > best) {
      best = v;
      best_r = r;
    }
  }
  const NodeMax m = max_speed(u);
  CHECK(m.value == doctest::Approx(best).epsilon(1e-4));
  CHECK(std::abs(m.r - best_r) <= g.dr);
  CHECK(m.z == g.z_min);
}

TEST_CASE("max_rspeed with capped 1/r swirl") {
  const Grid g = make_grid(16, 16, 2.0, -1.0, 1.0);
  const double c = 0.8, r1 = 0.5;
  AxisymField u(g);
  for (int i = 0; i <= g.nr; ++i) {
    const double r = g.r(i);
    for (int j = 0; j <= g.nz; ++j) u.vtheta(i, j) = r >= r1 ? c / r : c * r / (r1 * r1);
  }
  const NodeMax m = max_rspeed(u);
  CHECK(m.value == doctest::Approx(c));
  CHECK(m.r == doctest::Approx(r1));
  CHECK(m.z == g.z_min);
  CHECK(max_rspeed(AxisymField(g)).value == 0.0);
}

TEST_CASE("max_rspeed agrees with an exhaustive scan") {
  AxisymField u = stream_field(48);
  const Grid& g = u.grid;
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) u.vtheta(i, j) = 0.2 * g.r(i) * std::exp(-g.z(j) * g.z(j));
  }
  double best = -1.0;
  int bi = -1, bj = -1;
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) {
      const double v = g.r(i) * std::sqrt(u.vr(i, j) * u.vr(i, j) + u.vtheta(i, j) * u.vtheta(i, j) +
                                           u.vz(i, j) * u.vz(i, j));
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  }
  const NodeMax m = max_rspeed(u);
  CHECK(m.value == best);
  CHECK(m.i == bi);
  CHECK(m.j == bj);
}

TEST_CASE("kinetic energy of a uniform axial flow") {
  const Grid g = make_grid(8, 8, 1.0, 0.0, 1.0);
  AxisymField u(g);
  for (double& v : u.vz.values()) v = 2.0;
  double expect = 0.0;
  for (int i = 0; i <= g.nr; ++i) expect += g.r(i) * (g.nz + 1) * 4.0;
  CHECK(kinetic_energy(u) == doctest::Approx(0.5 * expect * g.dr * g.dz));
}
