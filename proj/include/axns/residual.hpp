#pragma once

#include <cstddef>
#include <vector>

#include "axns/history.hpp"

namespace axns {

struct EquationResidual {
  double sup = 0.0;
  double l2 = 0.0;  ///< RMS over time levels of sqrt(sum r dr dz R^2)

  friend bool operator==(const EquationResidual&, const EquationResidual&) = default;
};

/// Residuals of the three momentum equations and the divergence constraint.
struct ResidualReport {
  EquationResidual radial;
  EquationResidual swirl;
  EquationResidual axial;
  EquationResidual continuity;
  std::size_t levels = 0;

  /// Largest sup over the four equations.
  [[nodiscard]] double sup() const;
};

/// Evaluates
///   d_t vr + b.grad vr - vtheta^2 / r + d_r p - mu (Lap - 1/r^2) vr
///   d_t vtheta + b.grad vtheta + vr vtheta / r - mu (Lap - 1/r^2) vtheta
///   d_t vz + b.grad vz + d_z p - mu Lap vz
///   d_r vr + vr / r + d_z vz
/// on the interior nodes of every snapshot with a neighbour on both sides.
/// Space derivatives are centered; the time derivative is the three-point
/// formula on the (possibly nonuniform) snapshot times. Throws
/// std::invalid_argument when fewer than three snapshots are given.
ResidualReport mms_residual(const std::vector<const Snapshot*>& window, double mu = 1.0);

/// Snapshots [first, first + count) of the history.
ResidualReport mms_residual(const SnapshotHistory& history, std::size_t first, std::size_t count,
                            double mu = 1.0);

/// The whole stored history.
ResidualReport mms_residual(const SnapshotHistory& history, double mu = 1.0);

}  // namespace axns
