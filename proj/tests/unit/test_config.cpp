#include <string>

#include "axns/config.hpp"
#include "doctest.h"

using namespace axns;

namespace {

const char* kMinimal = R"({
  "grid": {"nr": 32, "nz": 64, "r_max": 4, "z_min": -4, "z_max": 4},
  "data": {"kind": "lamb_oseen"}
})";

std::string error_path(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("minimal document takes the documented defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.grid.nr == 32);
  CHECK(c.grid.z_min == -4.0);
  CHECK(c.solver == SolverConfig{});
  CHECK(c.microscope == MicroscopeConfig{});
  CHECK(c.invariants == InvariantConfig{});
  CHECK(c.data.kind == DataKind::LambOseen);
  CHECK(c.data.N0 == 1.0);
  CHECK(c.output_dir == "out");
  CHECK(c.history_capacity == 64);
  CHECK(c.sweep.empty());
}

TEST_CASE("errors name the offending path") {
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "lamb_oseen"}, "solver": {"mu": -1}})") == "solver.mu");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "lamb_oseen", "nuu": 1}})") == "data.nuu");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1},
                       "data": {"kind": "lamb_oseen"}})") == "grid.z_max");
  CHECK(error_path(R"({"grid": {"nr": "32", "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "lamb_oseen"}})") == "grid.nr");
  CHECK(error_path(R"({"grid": {"nr": 32.5, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "lamb_oseen"}})") == "grid.nr");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1}})") == "data");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "tornado"}})") == "data.kind");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "lamb_oseen"}, "extra": 1})") == "extra");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "lamb_oseen"}, "microscope": {"holder_alpha": 2}})") ==
        "microscope.holder_alpha");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "lamb_oseen", "nu": 2}})") == "data.nu");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "stream_random", "seed": -3}})") == "data.seed");
  CHECK(error_path(R"({"grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
                       "data": {"kind": "lamb_oseen"}, "solver": {"dt": 0.001, "cfl": 0.3}})") ==
        "solver");
  CHECK(error_path("{not json") == "<document>");
  CHECK(error_path("[]") == "<root>");
}

TEST_CASE("dt replaces the adaptive rule") {
  const RunConfig c = parse_config(R"({
    "grid": {"nr": 32, "nz": 32, "r_max": 1, "z_min": -1, "z_max": 1},
    "data": {"kind": "lamb_oseen"}, "solver": {"dt": 0.001}})");
  REQUIRE(c.solver.dt.has_value());
  CHECK(*c.solver.dt == 0.001);
  CHECK_FALSE(c.solver.cfl.has_value());
}

TEST_CASE("round trip") {
  RunConfig c = parse_config(kMinimal);
  c.solver.mu = 0.7;
  c.data.nu = 0.7;
  c.solver.t_end = 0.123456789012345;
  c.data.seed = 18446744073709551615ull;
  c.microscope.half_width = 0.3;
  c.microscope.interpolation = Interpolation::Cubic;
  c.invariants.h0 = 0.05;
  c.invariants.refinement = {32, 64, 128};
  c.output_dir = "runs/x";
  c.sweep["data.circulation"] = {"1.0", "2.0"};
  const std::string text = serialize_config(c);
  const RunConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
  RunConfig d = parse_config(kMinimal);
  d.solver.cfl.reset();
  d.solver.dt = 1e-4;
  CHECK(parse_config(serialize_config(d)) == d);
}

TEST_CASE("sweep expansion") {
  const RunConfig c = parse_config(R"({
    "grid": {"nr": 32, "nz": 32, "r_max": 4, "z_min": -2, "z_max": 2},
    "data": {"kind": "vortex_ring", "ring_radius": 2, "core_radius": 0.5},
    "output_dir": "fam",
    "sweep": {"data.amplitude": [4, 8, 16], "grid.nr": [32, 64]}})");
  const auto runs = expand_sweep(c);
  REQUIRE(runs.size() == 6);
  CHECK(runs[0].data.amplitude == 4.0);
  CHECK(runs[0].grid.nr == 32);
  CHECK(runs[1].grid.nr == 64);
  CHECK(runs[5].data.amplitude == 16.0);
  CHECK(runs[5].output_dir == std::filesystem::path("fam") / "run_005");
  for (const auto& r : runs) CHECK(r.sweep.empty());
  CHECK(expand_sweep(parse_config(kMinimal)).size() == 1);

  RunConfig bad = c;
  bad.sweep = {{"data.colour", {"1"}}};
  CHECK_THROWS_AS(expand_sweep(bad), ConfigError);
  bad.sweep = {{"data.amplitude", {"\"big\""}}};
  CHECK_THROWS_AS(expand_sweep(bad), ConfigError);
}

TEST_CASE("interpolation names") {
  CHECK(parse_interpolation("cubic") == Interpolation::Cubic);
  CHECK(to_string(Interpolation::Bilinear) == "bilinear");
  CHECK_THROWS_AS(parse_interpolation("spline"), std::invalid_argument);
}
