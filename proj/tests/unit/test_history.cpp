#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "axns/history.hpp"
#include "axns/snapshot_io.hpp"
#include "doctest.h"

using namespace axns;

namespace {

AxisymField ramp(const Grid& g, double scale) {
  AxisymField u(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) {
      u.vr(i, j) = scale * g.r(i) * g.z(j);
      u.vtheta(i, j) = scale * g.r(i);
      u.vz(i, j) = scale * (1.0 + g.z(j));
    }
  }
  return u;
}

}  // namespace

TEST_CASE("history ordering and eviction") {
  const Grid g = make_grid(8, 8, 1.0, 0.0, 1.0);
  SnapshotHistory h(3);
  for (int k = 0; k < 5; ++k) h.push(0.1 * k, ramp(g, 1.0 + k), ScalarField(g));
  CHECK(h.size() == 3);
  CHECK(h.t_first() == doctest::Approx(0.2));
  CHECK(h.t_last() == doctest::Approx(0.4));
  CHECK_THROWS_AS(h.push(0.4, ramp(g, 1.0), ScalarField(g)), std::invalid_argument);
  CHECK_THROWS_AS(h.push(0.3, ramp(g, 1.0), ScalarField(g)), std::invalid_argument);
  const Grid other = make_grid(8, 9, 1.0, 0.0, 1.0);
  CHECK_THROWS_AS(h.push(1.0, AxisymField(other), ScalarField(other)), std::invalid_argument);
  CHECK_THROWS_AS(SnapshotHistory(0), std::invalid_argument);
}

TEST_CASE("running maxima survive eviction") {
  const Grid g = make_grid(8, 8, 1.0, 0.0, 1.0);
  SnapshotHistory h(2);
  h.push(0.0, ramp(g, 5.0), ScalarField(g));
  h.push(0.1, ramp(g, 1.0), ScalarField(g));
  h.push(0.2, ramp(g, 1.0), ScalarField(g));
  const double q0 = max_speed(ramp(g, 5.0)).value;
  CHECK(h.sup_speed_until(0.2) == q0);
  CHECK(h.sup_rspeed_until(0.2) == max_rspeed(ramp(g, 5.0)).value);
  DiagnosticsRecord d;
  d.t = 0.15;
  d.Q = 100.0;
  d.R = 50.0;
  h.note(d);
  CHECK(h.sup_speed_until(0.1) == q0);
  CHECK(h.sup_speed_until(0.15) == 100.0);
  CHECK(h.sup_rspeed_until(0.2) == 50.0);
}

TEST_CASE("components_at interpolates linearly in time") {
  const Grid g = make_grid(8, 8, 1.0, 0.0, 1.0);
  SnapshotHistory h(4);
  h.push(0.0, ramp(g, 1.0), ScalarField(g));
  h.push(1.0, ramp(g, 3.0), ScalarField(g));
  const auto v = h.components_at(0.5, 0.5, 0.25, Interpolation::Bilinear);
  REQUIRE(v.has_value());
  CHECK((*v)[1] == doctest::Approx(0.5 * 1.5));
  CHECK((*v)[2] == doctest::Approx(1.5 * 1.5));
  CHECK_FALSE(h.components_at(0.5, 0.5, 1.5, Interpolation::Bilinear).has_value());
  CHECK_FALSE(h.components_at(0.5, 0.5, -0.1, Interpolation::Bilinear).has_value());
}

TEST_CASE("measure fills every diagnostic") {
  const Grid g = make_grid(8, 8, 1.0, 0.0, 1.0);
  const DiagnosticsRecord d = measure(ramp(g, 1.0), 7, 0.5);
  CHECK(d.step == 7);
  CHECK(d.t == 0.5);
  CHECK(d.Q == max_speed(ramp(g, 1.0)).value);
  CHECK(d.R == max_rspeed(ramp(g, 1.0)).value);
  CHECK(d.max_rvtheta == doctest::Approx(1.0));
  CHECK(d.energy == kinetic_energy(ramp(g, 1.0)));
}

TEST_CASE("snapshot round trip is bit exact") {
  const Grid g = make_grid(9, 12, 1.5, -0.25, 2.0);
  Snapshot s{0.125, ramp(g, std::acos(-1.0)), ScalarField(g, ScalarRole::Pressure)};
  s.pressure(3, 4) = -1e-300;
  std::stringstream buf;
  write_snapshot(buf, s);
  const std::string bytes = buf.str();
  CHECK(bytes.size() == 4 + 4 + 6 * 8 + 4 * g.size() * 8);
  CHECK(bytes.substr(0, 4) == "AXNS");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  const Snapshot r = read_snapshot(buf);
  CHECK(r.t == s.t);
  CHECK(r.field == s.field);
  CHECK(r.pressure.values == s.pressure.values);
}

TEST_CASE("corrupt snapshots are rejected") {
  std::stringstream bad("XXXX0000");
  CHECK_THROWS_WITH_AS(read_snapshot(bad), "bad magic", SnapshotFormatError);
  const Grid g = make_grid(8, 8, 1.0, 0.0, 1.0);
  std::stringstream buf;
  write_snapshot(buf, Snapshot{0.0, ramp(g, 1.0), ScalarField(g)});
  std::string bytes = buf.str();
  bytes.resize(bytes.size() - 8);
  std::stringstream cut(bytes);
  CHECK_THROWS_AS(read_snapshot(cut), SnapshotFormatError);
}

TEST_CASE("snapshot directory listing") {
  const auto dir = std::filesystem::temp_directory_path() / "axns_test_history_listing";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const Grid g = make_grid(8, 8, 1.0, 0.0, 1.0);
  for (long k : {2L, 0L, 1L}) {
    write_snapshot(dir / snapshot_filename(k), Snapshot{0.1 * k, ramp(g, 1.0), ScalarField(g)});
  }
  std::ofstream(dir / "notes.txt") << "x";
  const auto files = list_snapshots(dir);
  REQUIRE(files.size() == 3);
  CHECK(files[0].filename() == "snap_000000.axns");
  CHECK(files[2].filename() == "snap_000002.axns");
  CHECK(read_snapshot(files[1]).t == doctest::Approx(0.1));
  std::filesystem::remove_all(dir);
}
