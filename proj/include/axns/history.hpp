#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "axns/field_ops.hpp"
#include "axns/grid.hpp"

namespace axns {

/// Per-step scalars emitted by the simulator.
struct DiagnosticsRecord {
  long step = 0;
  double t = 0.0;
  double Q = 0.0;  ///< max |v|
  double argmax_r = 0.0;
  double argmax_z = 0.0;
  double R = 0.0;  ///< max r |v|
  double max_rvtheta = 0.0;
  double energy = 0.0;
  double max_divergence = 0.0;
  double boundary_max = 0.0;

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

DiagnosticsRecord measure(const AxisymField& field, long step, double t);

struct Snapshot {
  double t = 0.0;
  AxisymField field;
  ScalarField pressure;
};

/// Time-ordered ring buffer of snapshots.
///
/// Besides the stored snapshots the history keeps a trace of per-step running
/// maxima that survives eviction, so sup_{t <= t0} |v| and sup r|v| are taken
/// over the whole run rather than the buffered window.
class SnapshotHistory {
 public:
  explicit SnapshotHistory(std::size_t capacity = 64);

  /// Throws std::invalid_argument unless t is strictly after the last stored time.
  void push(double t, AxisymField field, ScalarField pressure);

  /// Records per-step maxima (and any other diagnostics) without storing a field.
  void note(const DiagnosticsRecord& record);

  [[nodiscard]] std::size_t size() const noexcept { return snapshots_.size(); }
  [[nodiscard]] bool empty() const noexcept { return snapshots_.empty(); }
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
  [[nodiscard]] const Snapshot& operator[](std::size_t k) const { return snapshots_.at(k); }
  [[nodiscard]] const Snapshot& back() const { return snapshots_.back(); }
  [[nodiscard]] const Grid& grid() const;
  [[nodiscard]] double t_first() const { return snapshots_.front().t; }
  [[nodiscard]] double t_last() const { return snapshots_.back().t; }
  [[nodiscard]] const std::vector<DiagnosticsRecord>& trace() const noexcept { return trace_; }

  /// sup over the trace and stored snapshots with time <= t (plus a small slack).
  [[nodiscard]] double sup_speed_until(double t) const;
  [[nodiscard]] double sup_rspeed_until(double t) const;

  /// Cylindrical components at (r, z, t), bilinear or cubic in space and
  /// linear in time. Returns nullopt when t is outside the stored span.
  [[nodiscard]] std::optional<Vec3> components_at(double r, double z, double t,
                                                  Interpolation scheme) const;

 private:
  std::size_t capacity_;
  std::deque<Snapshot> snapshots_;
  std::vector<DiagnosticsRecord> trace_;
  // Running sup over snapshots that have been evicted.
  struct Sup {
    double t;
    double Q;
    double R;
  };
  std::vector<Sup> snapshot_sups_;
};

}  // namespace axns
