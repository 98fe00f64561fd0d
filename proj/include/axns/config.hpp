#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "axns/initdata.hpp"
#include "axns/invariants.hpp"
#include "axns/microscope.hpp"
#include "axns/solver.hpp"

namespace axns {

/// Invalid configuration document; the message starts with the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct GridSpec {
  int nr = 0;
  int nz = 0;
  double r_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;

  [[nodiscard]] Grid make() const { return make_grid(nr, nz, r_max, z_min, z_max); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Everything a run needs. JSON schema (all sections are objects):
///
///   grid        nr, nz, r_max, z_min, z_max            (required)
///   solver      mu, dt | cfl, t_end, projection_tol, snapshot_every
///   data        kind (required), N0, circulation, nu, t_offset, amplitude,
///               ring_radius, ring_z, core_radius, swirl, seed, modes
///   microscope  epsilon, sigma0, holder_alpha, ratio_threshold, cube_space,
///               cube_time, interpolation ("bilinear" | "cubic"), half_width
///   invariants  h0, bound_tol, rvtheta_step_tol, energy_step_tol,
///               divergence_factor, projection_tol, scaling_lambda,
///               scaling_ratio_tol, rspeed_tol, refinement
///   output_dir, history_capacity
///   sweep       object mapping dotted key paths to value lists
///
/// Unknown keys are errors. Lamb-Oseen data requires solver.mu == data.nu.
struct RunConfig {
  GridSpec grid;
  SolverConfig solver;
  DataSpec data;
  MicroscopeConfig microscope;
  InvariantConfig invariants;
  std::filesystem::path output_dir = "out";
  std::size_t history_capacity = 64;
  /// Dotted key path -> JSON-encoded values, in key order.
  std::map<std::string, std::vector<std::string>> sweep;

  /// Throws ConfigError naming the section of the first violated invariant.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Complete document with every field; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// One configuration per point of the cartesian product of the sweep lists,
/// in lexicographic order with the last key varying fastest. Each has an
/// empty sweep and output_dir/run_NNN as its output directory. Without a
/// sweep the result is the config itself.
std::vector<RunConfig> expand_sweep(const RunConfig& config);

std::string to_string(Interpolation scheme);
Interpolation parse_interpolation(const std::string& name);

}  // namespace axns
