#include "axns/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace axns {

Grid make_grid(int nr, int nz, double r_max, double z_min, double z_max) {
  if (nr < 8 || nz < 8) {
    std::ostringstream msg;
    msg << "grid needs at least 8 cells per direction (got nr=" << nr << ", nz=" << nz << ")";
    throw std::invalid_argument(msg.str());
  }
  if (!(r_max > 0.0) || !(z_max > z_min) || !std::isfinite(r_max) || !std::isfinite(z_min) ||
      !std::isfinite(z_max)) {
    throw std::invalid_argument("grid extents must be finite with r_max > 0 and z_max > z_min");
  }
  Grid g;
  g.nr = nr;
  g.nz = nz;
  g.r_max = r_max;
  g.z_min = z_min;
  g.z_max = z_max;
  g.dr = r_max / nr;
  g.dz = (z_max - z_min) / nz;
  return g;
}

AxisymField apply_axis_conditions(AxisymField field) {
  const Grid& g = field.grid;
  for (int j = 0; j <= g.nz; ++j) {
    field.vr(0, j) = 0.0;
    field.vtheta(0, j) = 0.0;
    field.vz(0, j) = (4.0 * field.vz(1, j) - field.vz(2, j)) / 3.0;
  }
  return field;
}

namespace {

// One-sided second-order derivative at the low end (sign = +1) or the high end
// (sign = -1) of a line: (-3 f0 + 4 f1 - f2) / (2h) mirrored. Written in
// differences so that constants give exactly zero.
double one_sided(double f0, double f1, double f2, double h, double sign) {
  return sign * (4.0 * (f1 - f0) - (f2 - f0)) / (2.0 * h);
}

double radial_part(const AxisymField& u, int i, int j) {
  const Grid& g = u.grid;
  if (i == 0) return 2.0 * u.vr(1, j) / g.dr;
  if (i == g.nr) {
    const double d = one_sided(u.vr(i, j), u.vr(i - 1, j), u.vr(i - 2, j), g.dr, -1.0);
    return d + u.vr(i, j) / g.r(i);
  }
  return (g.r(i + 1) * u.vr(i + 1, j) - g.r(i - 1) * u.vr(i - 1, j)) / (2.0 * g.dr * g.r(i));
}

double axial_part(const AxisymField& u, int i, int j) {
  const Grid& g = u.grid;
  if (j == 0) return one_sided(u.vz(i, 0), u.vz(i, 1), u.vz(i, 2), g.dz, 1.0);
  if (j == g.nz) return one_sided(u.vz(i, j), u.vz(i, j - 1), u.vz(i, j - 2), g.dz, -1.0);
  return (u.vz(i, j + 1) - u.vz(i, j - 1)) / (2.0 * g.dz);
}

}  // namespace

ScalarField divergence(const AxisymField& field) {
  const Grid& g = field.grid;
  ScalarField out(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) {
      out(i, j) = radial_part(field, i, j) + axial_part(field, i, j);
    }
  }
  return out;
}

double max_divergence(const AxisymField& field) {
  const Grid& g = field.grid;
  double m = 0.0;
  for (int i = 0; i < g.nr; ++i) {
    for (int j = 1; j < g.nz; ++j) {
      m = std::max(m, std::abs(radial_part(field, i, j) + axial_part(field, i, j)));
    }
  }
  return m;
}

namespace {

struct Cell {
  int index;
  double frac;
};

Cell locate(double x, double h, int n) {
  const double s = x / h;
  int k = static_cast<int>(std::floor(s));
  k = std::clamp(k, 0, n - 1);
  return {k, std::clamp(s - k, 0.0, 1.0)};
}

double lerp(double a, double b, double t) { return a + t * (b - a); }

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  const double c3 = 3.0 * (p1 - p2) + p3 - p0;
  const double c2 = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
  return p1 + 0.5 * t * ((p2 - p0) + t * (c2 + t * c3));
}

// Node value with ghost extension: parity reflection across the axis and
// linear extrapolation past the far-field lines.
double extended(const NodeArray& a, const Grid& g, int i, int j, double parity) {
  double sign = 1.0;
  if (i < 0) {
    i = -i;
    sign = parity;
  }
  auto at_j = [&](int ii) {
    if (j < 0) return 2.0 * a(ii, 0) - a(ii, -j);
    if (j > g.nz) return 2.0 * a(ii, g.nz) - a(ii, 2 * g.nz - j);
    return a(ii, j);
  };
  if (i > g.nr) return sign * (2.0 * at_j(g.nr) - at_j(2 * g.nr - i));
  return sign * at_j(i);
}

double sample(const NodeArray& a, const Grid& g, const Cell& cr, const Cell& cz,
              Interpolation scheme, double parity) {
  if (scheme == Interpolation::Bilinear) {
    const int i = cr.index, j = cz.index;
    const double lo = lerp(a(i, j), a(i + 1, j), cr.frac);
    const double hi = lerp(a(i, j + 1), a(i + 1, j + 1), cr.frac);
    return lerp(lo, hi, cz.frac);
  }
  double col[4];
  for (int q = 0; q < 4; ++q) {
    const int j = cz.index - 1 + q;
    double p[4];
    for (int s = 0; s < 4; ++s) p[s] = extended(a, g, cr.index - 1 + s, j, parity);
    col[q] = catmull_rom(p[0], p[1], p[2], p[3], cr.frac);
  }
  return catmull_rom(col[0], col[1], col[2], col[3], cz.frac);
}

}  // namespace

Vec3 interpolate_components(const AxisymField& field, double r, double z,
                            Interpolation scheme) {
  const Grid& g = field.grid;
  const double slack_r = 1e-12 * g.r_max;
  const double slack_z = 1e-12 * (g.z_max - g.z_min);
  if (!(r >= 0.0) || r > g.r_max + slack_r || z < g.z_min - slack_z || z > g.z_max + slack_z ||
      !std::isfinite(z)) {
    std::ostringstream msg;
    msg << "point (r=" << r << ", z=" << z << ") outside grid [0," << g.r_max << "]x[" << g.z_min
        << "," << g.z_max << "]";
    throw OutOfDomainError(msg.str());
  }
  const Cell cr = locate(r, g.dr, g.nr);
  const Cell cz = locate(z - g.z_min, g.dz, g.nz);
  return {sample(field.vr, g, cr, cz, scheme, -1.0), sample(field.vtheta, g, cr, cz, scheme, -1.0),
          sample(field.vz, g, cr, cz, scheme, 1.0)};
}

Vec3 reconstruct_cartesian(const AxisymField& field, const Vec3& x, Interpolation scheme) {
  const CylindricalFrame frame = CylindricalFrame::at(x);
  const Vec3 c = interpolate_components(field, frame.r, x[2], scheme);
  if (frame.r == 0.0) return {0.0, 0.0, c[2]};
  return frame.to_cartesian(c[0], c[1], c[2]);
}

namespace {

constexpr double kTieTolerance = 8.0 * 2.220446049250313e-16;

template <class Weighted>
NodeMax scan_max(const Grid& g, Weighted&& value_at) {
  NodeMax best;
  best.z = g.z_min;
  bool first = true;
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) {
      const double v = value_at(i, j);
      if (first || v > best.value * (1.0 + kTieTolerance)) {
        best = {v, g.r(i), g.z(j), i, j};
        first = false;
      }
    }
  }
  return best;
}

}  // namespace

NodeMax max_speed(const AxisymField& field) {
  return scan_max(field.grid, [&](int i, int j) { return field.speed(i, j); });
}

NodeMax max_rspeed(const AxisymField& field) {
  const Grid& g = field.grid;
  return scan_max(g, [&](int i, int j) { return g.r(i) * field.speed(i, j); });
}

NodeMax max_rvtheta(const AxisymField& field) {
  const Grid& g = field.grid;
  return scan_max(g, [&](int i, int j) { return g.r(i) * std::abs(field.vtheta(i, j)); });
}

double kinetic_energy(const AxisymField& field) {
  const Grid& g = field.grid;
  double e = 0.0;
  for (int i = 1; i <= g.nr; ++i) {
    double row = 0.0;
    for (int j = 0; j <= g.nz; ++j) {
      const double s = field.speed(i, j);
      row += s * s;
    }
    e += g.r(i) * row;
  }
  return 0.5 * e * g.dr * g.dz;
}

double boundary_max(const AxisymField& field) {
  const Grid& g = field.grid;
  double m = 0.0;
  for (int j = 1; j < g.nz; ++j) m = std::max(m, field.speed(g.nr - 1, j));
  for (int i = 0; i < g.nr; ++i) {
    m = std::max(m, field.speed(i, 1));
    m = std::max(m, field.speed(i, g.nz - 1));
  }
  return m;
}

AxisymField combine(double a, const AxisymField& x, double b, const AxisymField& y) {
  AxisymField out(x.grid);
  auto mix = [&](const NodeArray& p, const NodeArray& q, NodeArray& o) {
    auto ps = p.values();
    auto qs = q.values();
    auto os = o.values();
    for (std::size_t k = 0; k < os.size(); ++k) os[k] = a * ps[k] + b * qs[k];
  };
  mix(x.vr, y.vr, out.vr);
  mix(x.vtheta, y.vtheta, out.vtheta);
  mix(x.vz, y.vz, out.vz);
  return out;
}

bool all_finite(const AxisymField& field) {
  for (const NodeArray* a : {&field.vr, &field.vtheta, &field.vz}) {
    for (double v : a->values()) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace axns
