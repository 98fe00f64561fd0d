#include "axns/initdata.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "axns/field_ops.hpp"

namespace axns {

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::LambOseen:
      return "lamb_oseen";
    case DataKind::VortexRingSwirl:
      return "vortex_ring_swirl";
    case DataKind::StreamRandom:
      return "stream_random";
  }
  return "unknown";
}

DataKind parse_data_kind(const std::string& name) {
  if (name == "lamb_oseen") return DataKind::LambOseen;
  if (name == "vortex_ring_swirl" || name == "vortex_ring") return DataKind::VortexRingSwirl;
  if (name == "stream_random") return DataKind::StreamRandom;
  throw std::invalid_argument("unknown data kind '" + name + "'");
}

void DataSpec::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(N0 > 0.0) || !finite(N0)) throw std::invalid_argument("data.N0 must be positive");
  for (double v : {circulation, nu, t_offset, amplitude, ring_radius, ring_z, core_radius, swirl}) {
    if (!finite(v)) throw std::invalid_argument("data parameters must be finite");
  }
  switch (kind) {
    case DataKind::LambOseen:
      if (!(nu > 0.0)) throw std::invalid_argument("data.nu must be positive");
      if (!(t_offset > 0.0)) throw std::invalid_argument("data.t_offset must be positive");
      break;
    case DataKind::VortexRingSwirl:
      if (!(core_radius > 0.0)) throw std::invalid_argument("data.core_radius must be positive");
      if (!(ring_radius > 3.0 * core_radius)) {
        throw std::invalid_argument("data.ring_radius must exceed 3 * data.core_radius");
      }
      break;
    case DataKind::StreamRandom:
      if (modes < 1) throw std::invalid_argument("data.modes must be >= 1");
      break;
  }
}

double lamb_oseen_vtheta(double r, double circulation, double nu, double t) {
  if (r == 0.0) return 0.0;
  return circulation / (2.0 * std::numbers::pi * r) * -std::expm1(-r * r / (4.0 * nu * t));
}

double lamb_oseen_pressure(double r, double circulation, double nu, double t) {
  auto integrand = [&](double s) {
    const double v = lamb_oseen_vtheta(s, circulation, nu, t);
    return s == 0.0 ? 0.0 : v * v / s;
  };
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  return -gauss_kronrod<double, 31>::integrate(integrand, r, inf, 15, 1e-13);
}

AxisymField lamb_oseen_field(double circulation, double nu, double t_offset, const Grid& grid) {
  if (!(t_offset > 0.0)) throw std::invalid_argument("t_offset must be positive");
  AxisymField u(grid);
  for (int i = 0; i <= grid.nr; ++i) {
    const double v = lamb_oseen_vtheta(grid.r(i), circulation, nu, t_offset);
    for (int j = 0; j <= grid.nz; ++j) u.vtheta(i, j) = v;
  }
  return u;
}

ScalarField lamb_oseen_pressure_field(double circulation, double nu, double t, const Grid& grid) {
  ScalarField p(grid, ScalarRole::Pressure);
  for (int i = 0; i <= grid.nr; ++i) {
    const double v = lamb_oseen_pressure(grid.r(i), circulation, nu, t);
    for (int j = 0; j <= grid.nz; ++j) p(i, j) = v;
  }
  return p;
}

N0Report check_n0_bounds(const AxisymField& field, double N0) {
  const Grid& g = field.grid;
  N0Report rep;
  double l2 = 0.0;
  for (int i = 0; i <= g.nr; ++i) {
    const double r = g.r(i);
    double row = 0.0;
    for (int j = 0; j <= g.nz; ++j) {
      const double s = field.speed(i, j);
      rep.sup_speed = std::max(rep.sup_speed, s);
      rep.sup_rspeed = std::max(rep.sup_rspeed, r * s);
      rep.sup_rvtheta = std::max(rep.sup_rvtheta, r * std::abs(field.vtheta(i, j)));
      row += s * s;
    }
    l2 += r * row;
  }
  rep.l2 = std::sqrt(2.0 * std::numbers::pi * l2 * g.dr * g.dz);
  rep.pass = rep.sup_speed <= N0 && rep.l2 <= N0 && rep.sup_rspeed <= N0;
  return rep;
}

namespace {

void normalise(AxisymField& u, double N0) {
  const N0Report rep = check_n0_bounds(u, N0);
  const double m = std::max({rep.sup_speed, rep.l2, rep.sup_rspeed});
  if (m <= N0 || m == 0.0) return;
  // Shrink slightly below N0 so rounding in the scaled values cannot push a
  // bound over.
  const double s = N0 / m * (1.0 - 1e-12);
  for (NodeArray* a : {&u.vr, &u.vtheta, &u.vz}) {
    for (double& v : a->values()) v *= s;
  }
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

AxisymField vortex_ring_swirl(const DataSpec& spec, const Grid& grid) {
  DataSpec s = spec;
  s.kind = DataKind::VortexRingSwirl;
  s.validate();
  const double A = spec.amplitude, rc = spec.ring_radius, zc = spec.ring_z;
  const double d2 = spec.core_radius * spec.core_radius;
  AxisymField u(grid);
  for (int i = 0; i <= grid.nr; ++i) {
    const double r = grid.r(i);
    for (int j = 0; j <= grid.nz; ++j) {
      const double z = grid.z(j);
      const double e = std::exp(-((r - rc) * (r - rc) + (z - zc) * (z - zc)) / d2);
      u.vr(i, j) = A * r * 2.0 * (z - zc) / d2 * e;
      u.vz(i, j) = A * (2.0 - 2.0 * r * (r - rc) / d2) * e;
      u.vtheta(i, j) = spec.swirl * (r / rc) * e;
    }
  }
  normalise(u, spec.N0);
  return u;
}

AxisymField stream_random(const DataSpec& spec, const Grid& grid) {
  DataSpec s = spec;
  s.kind = DataKind::StreamRandom;
  s.validate();
  std::mt19937_64 rng(spec.seed);
  const double lz = grid.z_max - grid.z_min;
  const double width = std::min(grid.r_max, lz);
  struct Packet {
    double a, b, zc, d2;
  };
  std::vector<Packet> packets;
  for (int k = 0; k < spec.modes; ++k) {
    Packet p{};
    p.a = 2.0 * uniform01(rng) - 1.0;
    p.b = 2.0 * uniform01(rng) - 1.0;
    p.zc = grid.z_min + lz * (0.25 + 0.5 * uniform01(rng));
    const double d = width * (0.08 + 0.12 * uniform01(rng));
    p.d2 = d * d;
    packets.push_back(p);
  }
  AxisymField u(grid);
  for (int i = 0; i <= grid.nr; ++i) {
    const double r = grid.r(i);
    for (int j = 0; j <= grid.nz; ++j) {
      const double z = grid.z(j);
      double vr = 0.0, vz = 0.0, vt = 0.0;
      for (const Packet& p : packets) {
        const double e = std::exp(-(r * r + (z - p.zc) * (z - p.zc)) / p.d2);
        vr += p.a * r * 2.0 * (z - p.zc) / p.d2 * e;
        vz += p.a * (2.0 - 2.0 * r * r / p.d2) * e;
        vt += p.b * r / std::sqrt(p.d2) * e;
      }
      u.vr(i, j) = vr;
      u.vz(i, j) = vz;
      u.vtheta(i, j) = vt;
    }
  }
  normalise(u, spec.N0);
  return u;
}

AxisymField generate(const DataSpec& spec, const Grid& grid) {
  spec.validate();
  switch (spec.kind) {
    case DataKind::LambOseen:
      return lamb_oseen_field(spec.circulation, spec.nu, spec.t_offset, grid);
    case DataKind::VortexRingSwirl:
      return vortex_ring_swirl(spec, grid);
    case DataKind::StreamRandom:
      return stream_random(spec, grid);
  }
  throw std::logic_error("unhandled data kind");
}

std::function<Vec3(double, double, double)> boundary_data(const DataSpec& spec) {
  if (spec.kind != DataKind::LambOseen) return {};
  const double gamma = spec.circulation, nu = spec.nu, t0 = spec.t_offset;
  return [=](double r, double, double t) {
    return Vec3{0.0, lamb_oseen_vtheta(r, gamma, nu, t0 + t), 0.0};
  };
}

}  // namespace axns
