#pragma once

#include <stdexcept>

#include "axns/grid.hpp"

namespace axns {

/// Thrown when a Cartesian query point lies outside the meridional grid.
class OutOfDomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class Interpolation { Bilinear, Cubic };

/// Location of a node-wise maximum together with its value.
struct NodeMax {
  double value = 0.0;
  double r = 0.0;
  double z = 0.0;
  int i = 0;
  int j = 0;
};

/// Zeroes v^r and v^theta on the axis and sets v^z there by the second-order
/// even extrapolation (4 f1 - f2) / 3, which makes the one-sided radial
/// derivative vanish. Interior nodes are untouched.
AxisymField apply_axis_conditions(AxisymField field);

/// Discrete d_r v^r + v^r / r + d_z v^z.
///
/// Interior nodes use the centered conservative form
/// (r_{i+1} v_{i+1} - r_{i-1} v_{i-1}) / (2 dr r_i); axis nodes use the limit
/// 2 d_r v^r + d_z v^z with an odd ghost for v^r. Far-field nodes use
/// one-sided second-order differences.
ScalarField divergence(const AxisymField& field);

/// Sup of |divergence| over the nodes where the constraint is imposed
/// (axis and interior, far-field boundary excluded).
double max_divergence(const AxisymField& field);

/// Interpolated cylindrical components (v^r, v^theta, v^z) at (r, z).
Vec3 interpolate_components(const AxisymField& field, double r, double z,
                            Interpolation scheme = Interpolation::Bilinear);

/// Cartesian velocity at x = (x1, x2, z). Throws OutOfDomainError when
/// sqrt(x1^2 + x2^2) > r_max or z leaves [z_min, z_max].
Vec3 reconstruct_cartesian(const AxisymField& field, const Vec3& x,
                           Interpolation scheme = Interpolation::Bilinear);

/// Max of |v| over nodes. Ties (within a few ulps) go to the smallest r,
/// then the smallest z.
NodeMax max_speed(const AxisymField& field);

/// Max of r |v| over nodes, same tie-break as max_speed.
NodeMax max_rspeed(const AxisymField& field);

/// Max of r |v^theta| over nodes.
NodeMax max_rvtheta(const AxisymField& field);

/// E = sum r dr dz |v|^2 / 2 over all nodes.
double kinetic_energy(const AxisymField& field);

/// Max |v| on the first node layer inside the far-field boundary; used to
/// monitor whether the truncated domain is large enough.
double boundary_max(const AxisymField& field);

/// Node-wise linear combination a * x + b * y.
AxisymField combine(double a, const AxisymField& x, double b, const AxisymField& y);

bool all_finite(const AxisymField& field);

}  // namespace axns
