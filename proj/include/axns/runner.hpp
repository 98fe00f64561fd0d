#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "axns/config.hpp"
#include "axns/history.hpp"
#include "axns/invariants.hpp"
#include "axns/microscope.hpp"

namespace axns {

enum class ExitCode : int { Ok = 0, Usage = 1, Numerical = 2, Invariant = 3 };

/// File layout under a run's output directory.
struct RunPaths {
  std::filesystem::path dir;

  [[nodiscard]] std::filesystem::path snapshots() const { return dir / "snapshots"; }
  [[nodiscard]] std::filesystem::path diagnostics() const { return dir / "diagnostics.csv"; }
  [[nodiscard]] std::filesystem::path microscope() const { return dir / "microscope.csv"; }
  [[nodiscard]] std::filesystem::path invariants() const { return dir / "invariants.csv"; }
  [[nodiscard]] std::filesystem::path summary() const { return dir / "summary.json"; }
  [[nodiscard]] std::filesystem::path config() const { return dir / "config.json"; }
  [[nodiscard]] std::filesystem::path failure() const { return dir / "failure.txt"; }
  [[nodiscard]] std::filesystem::path cubes() const { return dir / "cubes"; }
};

// CSV emitters. Every number is written in shortest round-trip form.
void write_diagnostics_header(std::ostream& out);
void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& r);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path);
void write_microscope_csv(std::ostream& out, const std::vector<MicroscopeRow>& rows);

/// Every snapshot in `snapshot_dir`, plus the per-step trace from
/// `diagnostics` when given. Throws SnapshotFormatError when the directory
/// holds no snapshots or a file is corrupt.
SnapshotHistory load_history(const std::filesystem::path& snapshot_dir,
                             const std::optional<std::filesystem::path>& diagnostics = {});

/// Time-steps the configured data from t = 0 to solver.t_end, writing
/// config.json, snapshots/ and diagnostics.csv. With resume set, continues
/// from the last stored snapshot. On a numerical failure the failing time is
/// written to failure.txt and ExitCode::Numerical is returned.
ExitCode run_simulate(const RunConfig& config, bool resume, std::ostream& log);

/// The mode-B row the criterion trend is read from: fully resolved cube
/// (no masked samples, not capped) with the largest alpha.
std::optional<MicroscopeRow> best_mode_b_row(const std::vector<MicroscopeRow>& rows);

/// Loads the history in `snapshot_dir` (with diagnostics.csv from its parent
/// directory when present) and writes microscope.csv to the config's output
/// directory. With dump_cubes set, each row's cube goes to cubes/.
ExitCode run_microscope(const RunConfig& config, const std::filesystem::path& snapshot_dir,
                        bool dump_cubes, std::ostream& log);

struct ConvergenceLevel {
  int n = 0;
  double error = 0.0;       ///< max |u - u_exact| over nodes and components at t_end
  double max_vtheta = 0.0;  ///< max |v^theta_exact| at t_end
  long steps = 0;
  double seconds = 0.0;
  SnapshotHistory tail{3};  ///< the last three states
};

/// Lamb-Oseen from the config's data (its circulation, nu and t_offset)
/// on n x n grids with the config's extents, run to solver.t_end.
std::vector<ConvergenceLevel> lamb_oseen_convergence(const RunConfig& config,
                                                     const std::vector<int>& levels);

/// Rows for the convergence study: error ratio per refinement in [3.5, 4.5]
/// and finest relative error <= 1e-3.
InvariantReport convergence_rows(const std::vector<ConvergenceLevel>& levels);

/// Simulates, runs the invariant suite on the result and, unless
/// skip_convergence, the Lamb-Oseen study at invariants.refinement. Writes
/// invariants.csv and summary.json.
ExitCode run_validate(const RunConfig& config, bool skip_convergence, std::ostream& log);

/// Runs simulate and microscope for every point of the sweep and writes
/// sweep_summary.csv to the base output directory.
ExitCode run_sweep(const RunConfig& config, std::ostream& log);

}  // namespace axns
