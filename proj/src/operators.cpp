#include "axns/operators.hpp"

namespace axns {

namespace {

double sign_of(Parity p) { return p == Parity::Odd ? -1.0 : 1.0; }

// f at radial index i >= -2 with the parity ghost for negative i.
double at(const NodeArray& f, int i, int j, double parity) {
  return i < 0 ? parity * f(-i, j) : f(i, j);
}

double upwind_r(const Grid& g, const NodeArray& f, int i, int j, double u, double parity) {
  if (u > 0.0) {
    return (3.0 * f(i, j) - 4.0 * at(f, i - 1, j, parity) + at(f, i - 2, j, parity)) /
           (2.0 * g.dr);
  }
  if (u < 0.0) {
    if (i + 2 <= g.nr) return (-3.0 * f(i, j) + 4.0 * f(i + 1, j) - f(i + 2, j)) / (2.0 * g.dr);
    return (f(i + 1, j) - f(i, j)) / g.dr;
  }
  return 0.0;
}

double upwind_z(const Grid& g, const NodeArray& f, int i, int j, double w) {
  if (w > 0.0) {
    if (j - 2 >= 0) return (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) / (2.0 * g.dz);
    return (f(i, j) - f(i, j - 1)) / g.dz;
  }
  if (w < 0.0) {
    if (j + 2 <= g.nz) return (-3.0 * f(i, j) + 4.0 * f(i, j + 1) - f(i, j + 2)) / (2.0 * g.dz);
    return (f(i, j + 1) - f(i, j)) / g.dz;
  }
  return 0.0;
}

double d_zz(const Grid& g, const NodeArray& f, int i, int j) {
  return (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (g.dz * g.dz);
}

// d_rr f + (1/r) d_r f at an interior node.
double radial_laplacian(const Grid& g, const NodeArray& f, int i, int j) {
  const double r = g.r(i);
  return (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (g.dr * g.dr) +
         (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.dr * r);
}

// (d_rr + (1/r) d_r - 1/r^2) f = d_r((1/r) d_r(r f)), differenced in that
// conservative form. Exact for a r + b r^3 down to the first node off the axis.
double swirllike_at(const Grid& g, const NodeArray& f, int i, int j) {
  const double r = g.r(i);
  const double lo = r - 0.5 * g.dr, hi = r + 0.5 * g.dr;
  const double g0 = g.r(i - 1) * f(i - 1, j), g1 = r * f(i, j), g2 = g.r(i + 1) * f(i + 1, j);
  return ((g2 - g1) / hi - (g1 - g0) / lo) / (g.dr * g.dr) + d_zz(g, f, i, j);
}

double plain_at(const Grid& g, const NodeArray& f, int i, int j) {
  if (i == 0) return 4.0 * (f(1, j) - f(0, j)) / (g.dr * g.dr) + d_zz(g, f, 0, j);
  return radial_laplacian(g, f, i, j) + d_zz(g, f, i, j);
}

}  // namespace

ScalarField advect(const AxisymField& b, const NodeArray& f, Parity parity) {
  const Grid& g = b.grid;
  const double s = sign_of(parity);
  ScalarField out(g);
  for (int i = 0; i < g.nr; ++i) {
    for (int j = 1; j < g.nz; ++j) {
      const double u = b.vr(i, j);
      const double w = b.vz(i, j);
      out(i, j) = u * upwind_r(g, f, i, j, u, s) + w * upwind_z(g, f, i, j, w);
    }
  }
  return out;
}

ScalarField advect(const AxisymField& b, const ScalarField& f, Parity parity) {
  return advect(b, f.values, parity);
}

ScalarField diffuse_swirllike(const Grid& g, const NodeArray& f) {
  ScalarField out(g);
  for (int i = 1; i < g.nr; ++i) {
    for (int j = 1; j < g.nz; ++j) out(i, j) = swirllike_at(g, f, i, j);
  }
  return out;
}

ScalarField diffuse_swirllike(const ScalarField& f) { return diffuse_swirllike(f.grid, f.values); }

ScalarField diffuse_plain(const Grid& g, const NodeArray& f) {
  ScalarField out(g);
  for (int i = 0; i < g.nr; ++i) {
    for (int j = 1; j < g.nz; ++j) out(i, j) = plain_at(g, f, i, j);
  }
  return out;
}

ScalarField diffuse_plain(const ScalarField& f) { return diffuse_plain(f.grid, f.values); }

AxisymField momentum_rhs(const AxisymField& state, double mu) {
  const Grid& g = state.grid;
  AxisymField out(g);
  const NodeArray& vr = state.vr;
  const NodeArray& vt = state.vtheta;
  const NodeArray& vz = state.vz;
  for (int i = 0; i < g.nr; ++i) {
    const double r = g.r(i);
    for (int j = 1; j < g.nz; ++j) {
      const double u = vr(i, j);
      const double w = vz(i, j);
      if (i > 0) {
        out.vr(i, j) = -(u * upwind_r(g, vr, i, j, u, -1.0) + w * upwind_z(g, vr, i, j, w)) +
                       vt(i, j) * vt(i, j) / r + mu * swirllike_at(g, vr, i, j);
        out.vtheta(i, j) = -(u * upwind_r(g, vt, i, j, u, -1.0) + w * upwind_z(g, vt, i, j, w)) -
                           u * vt(i, j) / r + mu * swirllike_at(g, vt, i, j);
      }
      out.vz(i, j) = -(u * upwind_r(g, vz, i, j, u, 1.0) + w * upwind_z(g, vz, i, j, w)) +
                     mu * plain_at(g, vz, i, j);
    }
  }
  return out;
}

}  // namespace axns
