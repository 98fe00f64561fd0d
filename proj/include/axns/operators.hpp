#pragma once

#include "axns/grid.hpp"

namespace axns {

/// Behaviour of a node field under r -> -r, used to fill the ghost column at
/// r = -dr. v^r and v^theta are odd; v^z and the pressure are even.
enum class Parity { Odd, Even };

/// vr d_r f + vz d_z f with second-order upwind differences, evaluated on the
/// axis and interior nodes (far-field nodes are left at zero). Where the
/// two-point upwind stencil would leave the grid the first-order upwind
/// difference is used.
ScalarField advect(const AxisymField& b, const ScalarField& f, Parity parity);
ScalarField advect(const AxisymField& b, const NodeArray& f, Parity parity);

/// (d_rr + (1/r) d_r - 1/r^2 + d_zz) f for an odd field, differenced as
/// d_r((1/r) d_r(r f)) + d_zz f; zero on the axis.
ScalarField diffuse_swirllike(const ScalarField& f);
ScalarField diffuse_swirllike(const Grid& g, const NodeArray& f);

/// (d_rr + (1/r) d_r + d_zz) f for an even field, with the axis limit
/// 2 d_rr f + d_zz f.
ScalarField diffuse_plain(const ScalarField& f);
ScalarField diffuse_plain(const Grid& g, const NodeArray& f);

/// Pressure-free tendency of the three momentum equations:
///   vr:     -b.grad vr     + vtheta^2 / r   + mu (Lap - 1/r^2) vr
///   vtheta: -b.grad vtheta - vr vtheta / r  + mu (Lap - 1/r^2) vtheta
///   vz:     -b.grad vz                      + mu Lap vz
/// The v^r and v^theta tendencies vanish on the axis; far-field nodes are zero.
AxisymField momentum_rhs(const AxisymField& state, double mu = 1.0);

/// Centered gradient (d_r p, d_z p) at node (i, j). Used for both the
/// projection and the residual so that the pressure term matches the
/// divergence stencil.
inline double grad_r(const Grid& g, const NodeArray& p, int i, int j) {
  return (p(i + 1, j) - p(i - 1, j)) / (2.0 * g.dr);
}
inline double grad_z(const Grid& g, const NodeArray& p, int i, int j) {
  return (p(i, j + 1) - p(i, j - 1)) / (2.0 * g.dz);
}

}  // namespace axns
