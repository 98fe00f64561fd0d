#include "axns/residual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "axns/operators.hpp"

namespace axns {

double ResidualReport::sup() const {
  return std::max({radial.sup, swirl.sup, axial.sup, continuity.sup});
}

namespace {

struct Accumulator {
  double sup = 0.0;
  double sum_l2 = 0.0;
  double level = 0.0;

  void add(double r_weight, double value) {
    sup = std::max(sup, std::abs(value));
    level += r_weight * value * value;
  }
  void close_level() {
    sum_l2 += level;
    level = 0.0;
  }
  EquationResidual result(std::size_t levels) const {
    return {sup, std::sqrt(sum_l2 / static_cast<double>(levels))};
  }
};

double centered_r(const Grid& g, const NodeArray& f, int i, int j) { return grad_r(g, f, i, j); }
double centered_z(const Grid& g, const NodeArray& f, int i, int j) { return grad_z(g, f, i, j); }

}  // namespace

ResidualReport mms_residual(const std::vector<const Snapshot*>& window, double mu) {
  if (window.size() < 3) throw std::invalid_argument("mms_residual needs at least 3 snapshots");
  const Grid& g = window.front()->field.grid;
  for (const Snapshot* s : window) {
    if (!(s->field.grid == g)) throw std::invalid_argument("snapshots on different grids");
  }
  Accumulator acc[4];
  ResidualReport report;
  for (std::size_t k = 1; k + 1 < window.size(); ++k) {
    const Snapshot& a = *window[k - 1];
    const Snapshot& s = *window[k];
    const Snapshot& b = *window[k + 1];
    const double h1 = s.t - a.t, h2 = b.t - s.t;
    if (!(h1 > 0.0 && h2 > 0.0)) throw std::invalid_argument("snapshot times must increase");
    const double ca = -h2 / (h1 * (h1 + h2));
    const double cs = (h2 - h1) / (h1 * h2);
    const double cb = h1 / (h2 * (h1 + h2));
    auto ddt = [&](const NodeArray AxisymField::*m, int i, int j) {
      return ca * (a.field.*m)(i, j) + cs * (s.field.*m)(i, j) + cb * (b.field.*m)(i, j);
    };

    const AxisymField& u = s.field;
    const ScalarField lap_r = diffuse_swirllike(g, u.vr);
    const ScalarField lap_t = diffuse_swirllike(g, u.vtheta);
    const ScalarField lap_z = diffuse_plain(g, u.vz);
    const bool has_p = s.pressure.values.size() == g.size();

    for (int i = 1; i < g.nr; ++i) {
      const double r = g.r(i);
      const double w = r * g.dr * g.dz;
      for (int j = 1; j < g.nz; ++j) {
        const double vr = u.vr(i, j), vt = u.vtheta(i, j), vz = u.vz(i, j);
        auto transport = [&](const NodeArray& f) {
          return vr * centered_r(g, f, i, j) + vz * centered_z(g, f, i, j);
        };
        const double dpr = has_p ? grad_r(g, s.pressure.values, i, j) : 0.0;
        const double dpz = has_p ? grad_z(g, s.pressure.values, i, j) : 0.0;
        acc[0].add(w, ddt(&AxisymField::vr, i, j) + transport(u.vr) - vt * vt / r + dpr -
                          mu * lap_r(i, j));
        acc[1].add(w, ddt(&AxisymField::vtheta, i, j) + transport(u.vtheta) + vr * vt / r -
                          mu * lap_t(i, j));
        acc[2].add(w, ddt(&AxisymField::vz, i, j) + transport(u.vz) + dpz - mu * lap_z(i, j));
        acc[3].add(w, (g.r(i + 1) * u.vr(i + 1, j) - g.r(i - 1) * u.vr(i - 1, j)) /
                              (2.0 * g.dr * r) +
                          centered_z(g, u.vz, i, j));
      }
    }
    for (auto& x : acc) x.close_level();
    ++report.levels;
  }
  report.radial = acc[0].result(report.levels);
  report.swirl = acc[1].result(report.levels);
  report.axial = acc[2].result(report.levels);
  report.continuity = acc[3].result(report.levels);
  return report;
}

ResidualReport mms_residual(const SnapshotHistory& history, std::size_t first, std::size_t count,
                            double mu) {
  if (first + count > history.size()) throw std::out_of_range("residual window exceeds history");
  std::vector<const Snapshot*> window;
  for (std::size_t k = first; k < first + count; ++k) window.push_back(&history[k]);
  return mms_residual(window, mu);
}

ResidualReport mms_residual(const SnapshotHistory& history, double mu) {
  return mms_residual(history, 0, history.size(), mu);
}

}  // namespace axns
