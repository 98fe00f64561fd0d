#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "axns/history.hpp"

namespace axns {

struct InvariantConfig {
  /// Short-time horizon. When unset the empirical horizon of the run is used.
  std::optional<double> h0;
  double bound_tol = 1e-9;       ///< relative slack on max r|v^theta| <= N0
  double rvtheta_step_tol = 1e-6;
  double energy_step_tol = 1e-8;
  double divergence_factor = 10.0;  ///< bound = factor * projection_tol
  double projection_tol = 1e-10;
  double scaling_lambda = 2.0;
  double scaling_ratio_tol = 0.125;  ///< residual ratio within (1 +- tol) lambda^3
  double rspeed_tol = 0.01;
  std::vector<int> refinement = {128, 256};

  void validate() const;

  friend bool operator==(const InvariantConfig&, const InvariantConfig&) = default;
};

/// One measured quantity against its admissible interval [lower, upper].
struct CheckRow {
  std::string check;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;

  /// Distance to the nearer end of the interval; negative when violated.
  [[nodiscard]] double margin() const;
};

CheckRow make_row(std::string check, double value, double lower, double upper);

struct InvariantReport {
  std::vector<CheckRow> rows;

  [[nodiscard]] bool pass() const;
  void append(const InvariantReport& other);
};

/// Per-step records of the run; falls back to measuring the stored snapshots
/// when the history carries no trace (e.g. loaded from disk).
std::vector<DiagnosticsRecord> step_records(const SnapshotHistory& history);

/// max r|v^theta| <= N0 (1 + bound_tol) at every step and its largest
/// relative increase between consecutive steps <= rvtheta_step_tol.
InvariantReport check_max_principle(const SnapshotHistory& history, double N0,
                                    const InvariantConfig& config = {});

/// Largest recorded time h such that max|v| <= 2 N0 on [t_first, h].
/// Returns t_first when the bound already fails initially.
double empirical_h0(const SnapshotHistory& history, double N0);

/// sup_{t <= h0} |v| <= 2 N0, with h0 from the config or empirical_h0, and
/// a row requiring the horizon to be positive.
InvariantReport check_short_time_bound(const SnapshotHistory& history, double N0,
                                       const InvariantConfig& config = {});

/// Largest relative increase of the weighted kinetic energy between
/// consecutive steps <= energy_step_tol.
InvariantReport check_energy(const SnapshotHistory& history, const InvariantConfig& config = {});

/// The history of lambda v(lambda x, lambda^2 t): the grid shrinks by lambda
/// with the same node counts, velocities scale by lambda, pressure by
/// lambda^2 and times by lambda^-2.
SnapshotHistory scale_history(const SnapshotHistory& history, double lambda);

/// Compares the rescaled history with the original: max r|v| at every
/// snapshot agrees within rspeed_tol and the residual ratio lies within
/// (1 +- scaling_ratio_tol) lambda^3. Needs three snapshots.
InvariantReport check_scaling_covariance(const SnapshotHistory& history, double lambda,
                                         double mu = 1.0, const InvariantConfig& config = {});

/// Sup-norm discrete divergence of every stored snapshot
/// <= divergence_factor * projection_tol.
InvariantReport check_divergence(const SnapshotHistory& history, const InvariantConfig& config = {});

/// All five checks; the scaling check is skipped below three snapshots.
InvariantReport check_all(const SnapshotHistory& history, double N0, double mu,
                          const InvariantConfig& config = {});

/// Columns check,value,lower,upper,margin,pass.
void write_invariants_csv(std::ostream& out, const InvariantReport& report);

/// Shortest round-trip decimal form, used for every emitted CSV number.
std::string format_double(double v);

}  // namespace axns
