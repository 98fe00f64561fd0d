#include "axns/microscope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "axns/snapshot_io.hpp"

namespace axns {

std::string to_string(ZoomMode mode) { return mode == ZoomMode::A ? "A" : "B"; }

ZoomParameters make_zoom(ZoomMode mode, double t0, double r0, double z0, double Q, double ratio) {
  ZoomParameters z;
  z.mode = mode;
  z.t0 = t0;
  z.r0 = r0;
  z.z0 = z0;
  z.Q = Q;
  z.alpha = r0 * Q;
  z.beta = z.alpha > 0.0 ? r0 / std::sqrt(z.alpha) : 0.0;
  z.ratio = ratio;
  return z;
}

void MicroscopeConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("microscope.epsilon must be positive");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("microscope.sigma0 must be positive");
  if (!(holder_alpha > 0.0 && holder_alpha < 1.0)) {
    throw std::invalid_argument("microscope.holder_alpha must lie in (0, 1)");
  }
  if (!(ratio_threshold > 0.0 && ratio_threshold < 1.0)) {
    throw std::invalid_argument("microscope.ratio_threshold must lie in (0, 1)");
  }
  if (cube_space < 5 || cube_space % 2 == 0) {
    throw std::invalid_argument("microscope.cube_space must be odd and >= 5");
  }
  if (cube_time < 3) throw std::invalid_argument("microscope.cube_time must be >= 3");
  if (half_width && !(*half_width > 0.0)) {
    throw std::invalid_argument("microscope.half_width must be positive");
  }
}

double MicroscopeConfig::nominal_half_width() const {
  return half_width ? *half_width : 1.0 / (sigma0 * epsilon);
}

double CubeSample::masked_fraction() const {
  if (valid.empty()) return 1.0;
  const auto n = static_cast<double>(std::count(valid.begin(), valid.end(), std::uint8_t{0}));
  return n / static_cast<double>(valid.size());
}

CubeSample sample_function(double L, int ns, int nt,
                           const std::function<Vec3(const Vec3&, double)>& f,
                           const std::function<double(const Vec3&, double)>& swirl) {
  CubeSample s;
  s.L = L;
  s.ns = ns;
  s.nt = nt;
  s.zoom = make_zoom(ZoomMode::A, 0.0, 0.0, 0.0, 1.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(nt) * static_cast<std::size_t>(ns * ns * ns);
  s.values.resize(n);
  s.swirl.assign(n, 0.0);
  s.valid.assign(n, 1);
  for (int k = 0; k < nt; ++k) {
    for (int a = 0; a < ns; ++a) {
      for (int b = 0; b < ns; ++b) {
        for (int c = 0; c < ns; ++c) {
          const Vec3 x{s.x(a), s.x(b), s.x(c)};
          const std::size_t id = s.index(k, a, b, c);
          s.values[id] = f(x, s.t(k));
          if (swirl) s.swirl[id] = swirl(x, s.t(k));
        }
      }
    }
  }
  return s;
}

std::vector<ZoomParameters> find_almost_maximal(const SnapshotHistory& history, ZoomMode mode,
                                                double ratio_threshold) {
  if (history.empty()) throw std::invalid_argument("find_almost_maximal needs a non-empty history");
  std::vector<ZoomParameters> out;
  for (std::size_t k = 0; k < history.size(); ++k) {
    const Snapshot& s = history[k];
    const NodeMax m = mode == ZoomMode::A ? max_speed(s.field) : max_rspeed(s.field);
    const double sup =
        mode == ZoomMode::A ? history.sup_speed_until(s.t) : history.sup_rspeed_until(s.t);
    const double ratio = sup > 0.0 ? std::min(1.0, m.value / sup) : 0.0;
    if (!(ratio >= ratio_threshold) || ratio == 0.0) continue;
    const double q = s.field.speed(m.i, m.j);
    out.push_back(make_zoom(mode, s.t, m.r, m.z, q, ratio));
  }
  return out;
}

CubeSample rescale_history(const SnapshotHistory& history, const ZoomParameters& zoom,
                           const MicroscopeConfig& config) {
  config.validate();
  if (!(zoom.Q > 0.0)) throw std::invalid_argument("cannot rescale a zoom with Q = 0");
  CubeSample s;
  s.zoom = zoom;
  s.ns = config.cube_space;
  s.nt = config.cube_time;
  s.L = config.nominal_half_width();
  const double cap = 0.5 * zoom.Q * zoom.r0;
  if (s.L > cap) {
    s.L = cap;
    s.capped = true;
  }
  if (!(s.L > 0.0)) throw std::invalid_argument("cube is degenerate (zoom point on the axis)");

  const std::size_t n = static_cast<std::size_t>(s.nt) * static_cast<std::size_t>(s.ns * s.ns * s.ns);
  s.values.assign(n, Vec3{0.0, 0.0, 0.0});
  s.swirl.assign(n, 0.0);
  s.valid.assign(n, 0);
  const double invQ = 1.0 / zoom.Q;
  const Vec3 x0 = zoom.x0();
  std::size_t valid = 0;
  for (int k = 0; k < s.nt; ++k) {
    // The last level is t~ = 0 exactly.
    const double t = k == s.nt - 1 ? zoom.t0 : zoom.t0 + s.t(k) * invQ * invQ;
    for (int a = 0; a < s.ns; ++a) {
      for (int b = 0; b < s.ns; ++b) {
        for (int c = 0; c < s.ns; ++c) {
          const Vec3 x{x0[0] + s.x(a) * invQ, x0[1] + s.x(b) * invQ, x0[2] + s.x(c) * invQ};
          const CylindricalFrame frame = CylindricalFrame::at(x);
          std::optional<Vec3> comp;
          try {
            comp = history.components_at(frame.r, x[2], t, config.interpolation);
          } catch (const OutOfDomainError&) {
            comp.reset();
          }
          if (!comp) continue;
          const Vec3& v = *comp;
          const std::size_t id = s.index(k, a, b, c);
          const Vec3 cart = frame.r == 0.0 ? Vec3{0.0, 0.0, v[2]} : frame.to_cartesian(v[0], v[1], v[2]);
          s.values[id] = {cart[0] / zoom.Q, cart[1] / zoom.Q, cart[2] / zoom.Q};
          s.swirl[id] = v[1] / zoom.Q;
          s.valid[id] = 1;
          ++valid;
        }
      }
    }
  }
  if (valid == 0) throw std::runtime_error("every cube sample is masked");
  return s;
}

namespace {

using Hessian = std::array<double, 27>;

struct Point {
  Vec3 x;
  double t;
};

double parabolic_distance(const Point& p, const Point& q) {
  const double dx = std::sqrt((p.x[0] - q.x[0]) * (p.x[0] - q.x[0]) +
                              (p.x[1] - q.x[1]) * (p.x[1] - q.x[1]) +
                              (p.x[2] - q.x[2]) * (p.x[2] - q.x[2]));
  return std::max(dx, std::sqrt(std::abs(p.t - q.t)));
}

void require_depth(const CubeSample& s) {
  std::vector<std::uint8_t> seen_a(static_cast<std::size_t>(s.ns)), seen_b(seen_a), seen_c(seen_a),
      seen_t(static_cast<std::size_t>(s.nt));
  for (int k = 0; k < s.nt; ++k) {
    for (int a = 0; a < s.ns; ++a) {
      for (int b = 0; b < s.ns; ++b) {
        for (int c = 0; c < s.ns; ++c) {
          if (!s.valid[s.index(k, a, b, c)]) continue;
          seen_t[static_cast<std::size_t>(k)] = 1;
          seen_a[static_cast<std::size_t>(a)] = 1;
          seen_b[static_cast<std::size_t>(b)] = 1;
          seen_c[static_cast<std::size_t>(c)] = 1;
        }
      }
    }
  }
  auto count = [](const std::vector<std::uint8_t>& v) { return std::count(v.begin(), v.end(), 1); };
  if (count(seen_a) < 5 || count(seen_b) < 5 || count(seen_c) < 5 || count(seen_t) < 3) {
    throw InsufficientSamplesError(
        "closeness needs 5 valid positions per spatial axis and 3 valid time levels");
  }
  if (!s.valid[s.index(s.nt - 1, s.ns / 2, s.ns / 2, s.ns / 2)]) {
    throw InsufficientSamplesError("cube centre sample is masked");
  }
}

}  // namespace

double swirl_smallness(const CubeSample& sample) {
  double m = 0.0;
  for (std::size_t k = 0; k < sample.swirl.size(); ++k) {
    if (sample.valid[k]) m = std::max(m, std::abs(sample.swirl[k]));
  }
  return m;
}

ClosenessReport constant_closeness(const CubeSample& s, const MicroscopeConfig& config) {
  require_depth(s);
  ClosenessReport rep;
  rep.c_star = s.center();
  std::size_t nvalid = 0;
  for (std::size_t id = 0; id < s.values.size(); ++id) {
    if (!s.valid[id]) continue;
    for (int m = 0; m < 3; ++m) rep.c_mean[m] += s.values[id][m];
    ++nvalid;
  }
  for (double& c : rep.c_mean) c /= static_cast<double>(nvalid);
  for (std::size_t id = 0; id < s.values.size(); ++id) {
    if (!s.valid[id]) continue;
    const Vec3& v = s.values[id];
    const Vec3 d{v[0] - rep.c_star[0], v[1] - rep.c_star[1], v[2] - rep.c_star[2]};
    const Vec3 e{v[0] - rep.c_mean[0], v[1] - rep.c_mean[1], v[2] - rep.c_mean[2]};
    rep.sup_dist = std::max(rep.sup_dist, norm(d));
    rep.sup_dist_mean = std::max(rep.sup_dist_mean, norm(e));
  }

  const double h = s.dx(), ht = s.dt();
  auto ok = [&](int k, int a, int b, int c) { return s.valid[s.index(k, a, b, c)] != 0; };
  auto val = [&](int k, int a, int b, int c, int m) { return s.values[s.index(k, a, b, c)][m]; };

  std::vector<Point> hess_pts, dt_pts;
  std::vector<Hessian> hess_vals;
  std::vector<Vec3> dt_vals;
  for (int k = 0; k < s.nt; ++k) {
    for (int a = 1; a + 1 < s.ns; ++a) {
      for (int b = 1; b + 1 < s.ns; ++b) {
        for (int c = 1; c + 1 < s.ns; ++c) {
          bool full = true;
          for (int da = -1; da <= 1 && full; ++da) {
            for (int db = -1; db <= 1 && full; ++db) {
              for (int dc = -1; dc <= 1 && full; ++dc) full = ok(k, a + da, b + db, c + dc);
            }
          }
          if (!full) continue;
          const int idx[3] = {a, b, c};
          auto at = [&](const std::array<int, 3>& off, int m) {
            return val(k, idx[0] + off[0], idx[1] + off[1], idx[2] + off[2], m);
          };
          double g2 = 0.0;
          Hessian H{};
          for (int m = 0; m < 3; ++m) {
            const double v0 = at({0, 0, 0}, m);
            for (int d = 0; d < 3; ++d) {
              std::array<int, 3> p{0, 0, 0}, q{0, 0, 0};
              p[static_cast<std::size_t>(d)] = 1;
              q[static_cast<std::size_t>(d)] = -1;
              const double g = (at(p, m) - at(q, m)) / (2.0 * h);
              g2 += g * g;
              for (int e = 0; e < 3; ++e) {
                double hv;
                if (d == e) {
                  hv = (at(p, m) - 2.0 * v0 + at(q, m)) / (h * h);
                } else {
                  std::array<int, 3> pp{0, 0, 0}, pm{0, 0, 0}, mp{0, 0, 0}, mm{0, 0, 0};
                  pp[static_cast<std::size_t>(d)] = 1;
                  pp[static_cast<std::size_t>(e)] = 1;
                  pm[static_cast<std::size_t>(d)] = 1;
                  pm[static_cast<std::size_t>(e)] = -1;
                  mp[static_cast<std::size_t>(d)] = -1;
                  mp[static_cast<std::size_t>(e)] = 1;
                  mm[static_cast<std::size_t>(d)] = -1;
                  mm[static_cast<std::size_t>(e)] = -1;
                  hv = (at(pp, m) - at(pm, m) - at(mp, m) + at(mm, m)) / (4.0 * h * h);
                }
                H[static_cast<std::size_t>(9 * m + 3 * d + e)] = hv;
              }
            }
          }
          rep.grad_sup = std::max(rep.grad_sup, std::sqrt(g2));
          double hn = 0.0;
          for (double x : H) hn += x * x;
          rep.hess_sup = std::max(rep.hess_sup, std::sqrt(hn));
          hess_pts.push_back({{s.x(a), s.x(b), s.x(c)}, s.t(k)});
          hess_vals.push_back(H);
        }
      }
    }
  }
  for (int k = 1; k + 1 < s.nt; ++k) {
    for (int a = 0; a < s.ns; ++a) {
      for (int b = 0; b < s.ns; ++b) {
        for (int c = 0; c < s.ns; ++c) {
          if (!ok(k - 1, a, b, c) || !ok(k + 1, a, b, c)) continue;
          Vec3 d;
          for (int m = 0; m < 3; ++m) d[m] = (val(k + 1, a, b, c, m) - val(k - 1, a, b, c, m)) / (2.0 * ht);
          rep.dt_sup = std::max(rep.dt_sup, norm(d));
          dt_pts.push_back({{s.x(a), s.x(b), s.x(c)}, s.t(k)});
          dt_vals.push_back(d);
        }
      }
    }
  }

  const double alpha = config.holder_alpha;
  double hq = 0.0, tq = 0.0;
  for (std::size_t p = 0; p < hess_pts.size(); ++p) {
    for (std::size_t q = p + 1; q < hess_pts.size(); ++q) {
      double d2 = 0.0;
      for (std::size_t m = 0; m < 27; ++m) {
        const double d = hess_vals[p][m] - hess_vals[q][m];
        d2 += d * d;
      }
      if (d2 == 0.0) continue;
      hq = std::max(hq, std::sqrt(d2) / std::pow(parabolic_distance(hess_pts[p], hess_pts[q]), alpha));
    }
  }
  for (std::size_t p = 0; p < dt_pts.size(); ++p) {
    for (std::size_t q = p + 1; q < dt_pts.size(); ++q) {
      const Vec3 d{dt_vals[p][0] - dt_vals[q][0], dt_vals[p][1] - dt_vals[q][1],
                   dt_vals[p][2] - dt_vals[q][2]};
      const double n = norm(d);
      if (n == 0.0) continue;
      tq = std::max(tq, n / std::pow(parabolic_distance(dt_pts[p], dt_pts[q]), alpha));
    }
  }
  rep.holder = hq + tq;
  rep.total = rep.sup_dist + rep.grad_sup + rep.hess_sup + rep.dt_sup + rep.holder;
  rep.swirl_ratio = swirl_smallness(s);
  return rep;
}

std::vector<MicroscopeRow> microscope_report(const SnapshotHistory& history,
                                             const MicroscopeConfig& config) {
  config.validate();
  if (history.size() < 2) {
    throw std::invalid_argument("microscope needs at least two snapshots for time depth");
  }
  std::vector<MicroscopeRow> rows;
  for (ZoomMode mode : {ZoomMode::A, ZoomMode::B}) {
    for (const ZoomParameters& z : find_almost_maximal(history, mode, config.ratio_threshold)) {
      if (!(z.r0 > 0.0) || !(z.Q > 0.0)) continue;
      const CubeSample cube = rescale_history(history, z, config);
      MicroscopeRow row;
      row.zoom = z;
      row.L = cube.L;
      row.capped = cube.capped;
      row.masked_fraction = cube.masked_fraction();
      try {
        row.closeness = constant_closeness(cube, config);
      } catch (const InsufficientSamplesError&) {
        continue;
      }
      rows.push_back(row);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const MicroscopeRow& a, const MicroscopeRow& b) {
    return a.zoom.alpha > b.zoom.alpha;
  });
  return rows;
}

void write_cube(const std::filesystem::path& path, const CubeSample& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(kCubeMagic, 4);
  binio::put_u32(out, 1);
  for (double v : {static_cast<double>(s.ns), static_cast<double>(s.nt), s.L, s.zoom.Q, s.zoom.r0,
                   s.zoom.z0, s.zoom.t0, s.zoom.ratio, s.zoom.theta0,
                   s.zoom.mode == ZoomMode::A ? 0.0 : 1.0, s.capped ? 1.0 : 0.0, 0.0}) {
    binio::put_f64(out, v);
  }
  for (std::size_t id = 0; id < s.values.size(); ++id) {
    for (double v : s.values[id]) binio::put_f64(out, v);
    binio::put_f64(out, s.swirl[id]);
    binio::put_f64(out, s.valid[id] ? 1.0 : 0.0);
  }
  if (!out) throw std::runtime_error("failed writing cube " + path.string());
}

CubeSample read_cube(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotFormatError("cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kCubeMagic)) {
    throw SnapshotFormatError("bad magic");
  }
  if (binio::get_u32(in) != 1) throw SnapshotFormatError("unsupported cube version");
  double h[12];
  for (double& v : h) v = binio::get_f64(in);
  if (!(h[0] >= 1 && h[0] <= 1024 && h[1] >= 1 && h[1] <= 1024)) {
    throw SnapshotFormatError("corrupt cube dimensions");
  }
  CubeSample s;
  s.ns = static_cast<int>(h[0]);
  s.nt = static_cast<int>(h[1]);
  s.L = h[2];
  s.zoom = make_zoom(h[9] == 0.0 ? ZoomMode::A : ZoomMode::B, h[6], h[4], h[5], h[3], h[7]);
  s.zoom.theta0 = h[8];
  s.capped = h[10] != 0.0;
  const std::size_t n = static_cast<std::size_t>(s.nt) * static_cast<std::size_t>(s.ns * s.ns * s.ns);
  s.values.resize(n);
  s.swirl.resize(n);
  s.valid.resize(n);
  for (std::size_t id = 0; id < n; ++id) {
    for (double& v : s.values[id]) v = binio::get_f64(in);
    s.swirl[id] = binio::get_f64(in);
    s.valid[id] = binio::get_f64(in) != 0.0 ? 1 : 0;
  }
  return s;
}

}  // namespace axns
