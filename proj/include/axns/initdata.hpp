#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "axns/grid.hpp"

namespace axns {

enum class DataKind { LambOseen, VortexRingSwirl, StreamRandom };

std::string to_string(DataKind kind);
/// Accepts "lamb_oseen", "vortex_ring_swirl" (alias "vortex_ring") and "stream_random".
DataKind parse_data_kind(const std::string& name);

struct DataSpec {
  DataKind kind = DataKind::LambOseen;
  double N0 = 1.0;

  // lamb_oseen
  double circulation = 1.0;
  double nu = 1.0;
  double t_offset = 0.1;

  // vortex_ring_swirl
  double amplitude = 1.0;    ///< A in psi = A r^2 exp(-d^2 / delta^2)
  double ring_radius = 1.0;  ///< r_c
  double ring_z = 0.0;       ///< z_c
  double core_radius = 0.25; ///< delta
  double swirl = 0.5;        ///< S

  // stream_random
  std::uint64_t seed = 1;
  int modes = 4;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const DataSpec&, const DataSpec&) = default;
};

/// (Gamma / (2 pi r)) (1 - exp(-r^2 / (4 nu t))), with the r -> 0 limit 0.
double lamb_oseen_vtheta(double r, double circulation, double nu, double t);

/// Pressure of the Lamb-Oseen vortex, p(r) = -int_r^inf v_theta^2 / s ds, so
/// that p -> 0 far away and d_r p = v_theta^2 / r.
double lamb_oseen_pressure(double r, double circulation, double nu, double t);

AxisymField lamb_oseen_field(double circulation, double nu, double t_offset, const Grid& grid);
ScalarField lamb_oseen_pressure_field(double circulation, double nu, double t, const Grid& grid);

/// Vortex ring from psi = A r^2 E with E = exp(-((r - r_c)^2 + (z - z_c)^2) / delta^2):
/// vr = -(1/r) d_z psi, vz = (1/r) d_r psi, vtheta = S (r / r_c) E; then scaled
/// by min(1, N0 / max(sup|v|, L2 norm, sup r|v|)) so the three bounds hold.
/// Requires r_c > 3 delta.
AxisymField vortex_ring_swirl(const DataSpec& spec, const Grid& grid);

/// Sum of `modes` Gaussian stream-function and swirl packets centred on the
/// axis with seeded random amplitudes, heights and widths; scaled as above.
AxisymField stream_random(const DataSpec& spec, const Grid& grid);

struct N0Report {
  double sup_speed = 0.0;
  double l2 = 0.0;           ///< sqrt(sum 2 pi r dr dz |v|^2)
  double sup_rspeed = 0.0;   ///< max r |v|, full vector magnitude
  double sup_rvtheta = 0.0;  ///< max r |v^theta|, the swirl-only reading
  bool pass = false;
};

N0Report check_n0_bounds(const AxisymField& field, double N0);

/// Field for any DataSpec. Lamb-Oseen data ignores N0.
AxisymField generate(const DataSpec& spec, const Grid& grid);

/// Far-field velocity for a data kind: the analytic profile at t_offset + t
/// for Lamb-Oseen, empty (homogeneous) otherwise.
std::function<Vec3(double, double, double)> boundary_data(const DataSpec& spec);

}  // namespace axns
