#include "axns/history.hpp"

#include <algorithm>
#include <stdexcept>

namespace axns {

DiagnosticsRecord measure(const AxisymField& field, long step, double t) {
  DiagnosticsRecord d;
  d.step = step;
  d.t = t;
  const NodeMax q = max_speed(field);
  d.Q = q.value;
  d.argmax_r = q.r;
  d.argmax_z = q.z;
  d.R = max_rspeed(field).value;
  d.max_rvtheta = max_rvtheta(field).value;
  d.energy = kinetic_energy(field);
  d.max_divergence = max_divergence(field);
  d.boundary_max = boundary_max(field);
  return d;
}

SnapshotHistory::SnapshotHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("history capacity must be positive");
}

void SnapshotHistory::push(double t, AxisymField field, ScalarField pressure) {
  if (!snapshots_.empty()) {
    if (!(t > snapshots_.back().t)) {
      throw std::invalid_argument("snapshot times must be strictly increasing");
    }
    if (!(field.grid == snapshots_.back().field.grid)) {
      throw std::invalid_argument("snapshot grid differs from the history grid");
    }
  }
  snapshot_sups_.push_back({t, max_speed(field).value, max_rspeed(field).value});
  snapshots_.push_back({t, std::move(field), std::move(pressure)});
  while (snapshots_.size() > capacity_) snapshots_.pop_front();
}

void SnapshotHistory::note(const DiagnosticsRecord& record) { trace_.push_back(record); }

const Grid& SnapshotHistory::grid() const {
  if (snapshots_.empty()) throw std::logic_error("empty history has no grid");
  return snapshots_.front().field.grid;
}

namespace {
constexpr double kTimeSlack = 1e-12;
}

double SnapshotHistory::sup_speed_until(double t) const {
  const double limit = t + kTimeSlack * std::max(1.0, std::abs(t));
  double s = 0.0;
  for (const auto& d : trace_) {
    if (d.t <= limit) s = std::max(s, d.Q);
  }
  for (const auto& d : snapshot_sups_) {
    if (d.t <= limit) s = std::max(s, d.Q);
  }
  return s;
}

double SnapshotHistory::sup_rspeed_until(double t) const {
  const double limit = t + kTimeSlack * std::max(1.0, std::abs(t));
  double s = 0.0;
  for (const auto& d : trace_) {
    if (d.t <= limit) s = std::max(s, d.R);
  }
  for (const auto& d : snapshot_sups_) {
    if (d.t <= limit) s = std::max(s, d.R);
  }
  return s;
}

std::optional<Vec3> SnapshotHistory::components_at(double r, double z, double t,
                                                   Interpolation scheme) const {
  if (snapshots_.empty()) return std::nullopt;
  const double slack = kTimeSlack * std::max(1.0, std::abs(t));
  if (t < snapshots_.front().t - slack || t > snapshots_.back().t + slack) return std::nullopt;
  if (snapshots_.size() == 1 || t >= snapshots_.back().t) {
    return interpolate_components(snapshots_.back().field, r, z, scheme);
  }
  if (t <= snapshots_.front().t) {
    return interpolate_components(snapshots_.front().field, r, z, scheme);
  }
  auto it = std::upper_bound(snapshots_.begin(), snapshots_.end(), t,
                             [](double tt, const Snapshot& s) { return tt < s.t; });
  const Snapshot& hi = *it;
  const Snapshot& lo = *(it - 1);
  const Vec3 a = interpolate_components(lo.field, r, z, scheme);
  if (t == lo.t) return a;
  const Vec3 b = interpolate_components(hi.field, r, z, scheme);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return Vec3{a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1]), a[2] + w * (b[2] - a[2])};
}

}  // namespace axns
