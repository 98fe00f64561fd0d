#include "axns/invariants.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "axns/residual.hpp"

namespace axns {

void InvariantConfig::validate() const {
  if (h0 && !(*h0 > 0.0)) throw std::invalid_argument("invariants.h0 must be positive");
  for (double v : {bound_tol, rvtheta_step_tol, energy_step_tol, divergence_factor, projection_tol,
                   scaling_ratio_tol, rspeed_tol}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("invariants: tolerances must be positive");
    }
  }
  if (!(scaling_lambda > 0.0)) throw std::invalid_argument("invariants.scaling_lambda must be positive");
  if (refinement.size() < 2) throw std::invalid_argument("invariants.refinement needs two levels");
  for (std::size_t k = 0; k < refinement.size(); ++k) {
    if (refinement[k] < 8 || (k > 0 && refinement[k] != 2 * refinement[k - 1])) {
      throw std::invalid_argument("invariants.refinement must double from a level >= 8");
    }
  }
}

double CheckRow::margin() const { return std::min(value - lower, upper - value); }

CheckRow make_row(std::string check, double value, double lower, double upper) {
  CheckRow row;
  row.check = std::move(check);
  row.value = value;
  row.lower = lower;
  row.upper = upper;
  row.pass = value >= lower && value <= upper;
  return row;
}

bool InvariantReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

void InvariantReport::append(const InvariantReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::vector<DiagnosticsRecord> step_records(const SnapshotHistory& history) {
  if (!history.trace().empty()) return history.trace();
  std::vector<DiagnosticsRecord> out;
  for (std::size_t k = 0; k < history.size(); ++k) {
    out.push_back(measure(history[k].field, static_cast<long>(k), history[k].t));
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest (b - a) / a over consecutive pairs; an increase from zero is infinite.
template <class Get>
double worst_increase(const std::vector<DiagnosticsRecord>& recs, Get get) {
  double worst = 0.0;
  for (std::size_t k = 1; k < recs.size(); ++k) {
    const double a = get(recs[k - 1]), b = get(recs[k]);
    if (b <= a) continue;
    worst = std::max(worst, a > 0.0 ? (b - a) / a : kInf);
  }
  return worst;
}

}  // namespace

InvariantReport check_max_principle(const SnapshotHistory& history, double N0,
                                    const InvariantConfig& config) {
  const auto recs = step_records(history);
  double peak = 0.0;
  for (const auto& r : recs) peak = std::max(peak, r.max_rvtheta);
  InvariantReport rep;
  rep.rows.push_back(make_row("max_principle.sup_rvtheta", peak, 0.0, N0 * (1.0 + config.bound_tol)));
  rep.rows.push_back(make_row("max_principle.step_increase",
                              worst_increase(recs, [](const auto& r) { return r.max_rvtheta; }), 0.0,
                              config.rvtheta_step_tol));
  return rep;
}

double empirical_h0(const SnapshotHistory& history, double N0) {
  const auto recs = step_records(history);
  if (recs.empty()) throw std::invalid_argument("empirical_h0 needs a non-empty history");
  double h = recs.front().t;
  for (const auto& r : recs) {
    if (!(r.Q <= 2.0 * N0)) break;
    h = r.t;
  }
  return h;
}

InvariantReport check_short_time_bound(const SnapshotHistory& history, double N0,
                                       const InvariantConfig& config) {
  const auto recs = step_records(history);
  if (recs.empty()) throw std::invalid_argument("check_short_time_bound needs a non-empty history");
  const double t_first = recs.front().t;
  const double h0 = config.h0 ? t_first + *config.h0 : empirical_h0(history, N0);
  double sup = 0.0;
  for (const auto& r : recs) {
    if (r.t <= h0) sup = std::max(sup, r.Q);
  }
  InvariantReport rep;
  rep.rows.push_back(make_row("short_time.h0", h0 - t_first, std::numeric_limits<double>::min(), kInf));
  rep.rows.push_back(make_row("short_time.sup_speed", sup, 0.0, 2.0 * N0));
  return rep;
}

InvariantReport check_energy(const SnapshotHistory& history, const InvariantConfig& config) {
  const auto recs = step_records(history);
  InvariantReport rep;
  rep.rows.push_back(make_row("energy.step_increase",
                              worst_increase(recs, [](const auto& r) { return r.energy; }), 0.0,
                              config.energy_step_tol));
  return rep;
}

SnapshotHistory scale_history(const SnapshotHistory& history, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scale_history needs lambda > 0");
  if (history.empty()) throw std::invalid_argument("scale_history needs a non-empty history");
  const Grid& g0 = history.grid();
  const Grid g = make_grid(g0.nr, g0.nz, g0.r_max / lambda, g0.z_min / lambda, g0.z_max / lambda);
  const double l2 = lambda * lambda;
  SnapshotHistory out(std::max<std::size_t>(history.capacity(), history.size()));
  for (DiagnosticsRecord r : history.trace()) {
    r.t /= l2;
    r.Q *= lambda;
    r.argmax_r /= lambda;
    r.argmax_z /= lambda;
    r.energy /= lambda;
    r.max_divergence *= l2;
    r.boundary_max *= lambda;
    out.note(r);
  }
  for (std::size_t k = 0; k < history.size(); ++k) {
    const Snapshot& s = history[k];
    AxisymField f(g);
    ScalarField p(g, s.pressure.role);
    auto scale = [](std::span<double> dst, std::span<const double> src, double c) {
      for (std::size_t n = 0; n < dst.size(); ++n) dst[n] = c * src[n];
    };
    scale(f.vr.values(), s.field.vr.values(), lambda);
    scale(f.vtheta.values(), s.field.vtheta.values(), lambda);
    scale(f.vz.values(), s.field.vz.values(), lambda);
    scale(p.values.values(), s.pressure.values.values(), l2);
    out.push(s.t / l2, std::move(f), std::move(p));
  }
  return out;
}

InvariantReport check_scaling_covariance(const SnapshotHistory& history, double lambda, double mu,
                                         const InvariantConfig& config) {
  if (history.size() < 3) throw std::invalid_argument("check_scaling_covariance needs three snapshots");
  const SnapshotHistory scaled = scale_history(history, lambda);
  double worst = 0.0;
  for (std::size_t k = 0; k < history.size(); ++k) {
    const double a = max_rspeed(history[k].field).value;
    const double b = max_rspeed(scaled[k].field).value;
    const double d = std::abs(b - a);
    worst = std::max(worst, a > 0.0 ? d / a : (d > 0.0 ? kInf : 0.0));
  }
  const double r0 = mms_residual(history, mu).sup();
  const double r1 = mms_residual(scaled, mu).sup();
  const double l3 = lambda * lambda * lambda;
  // A vanishing residual is covariant with any factor.
  const double ratio = r0 > 0.0 ? r1 / r0 : (r1 == 0.0 ? l3 : kInf);
  InvariantReport rep;
  rep.rows.push_back(make_row("scaling.rspeed_change", worst, 0.0, config.rspeed_tol));
  rep.rows.push_back(make_row("scaling.residual_ratio", ratio, l3 * (1.0 - config.scaling_ratio_tol),
                              l3 * (1.0 + config.scaling_ratio_tol)));
  return rep;
}

InvariantReport check_divergence(const SnapshotHistory& history, const InvariantConfig& config) {
  double worst = 0.0;
  for (std::size_t k = 0; k < history.size(); ++k) {
    worst = std::max(worst, max_divergence(history[k].field));
  }
  InvariantReport rep;
  rep.rows.push_back(
      make_row("divergence.sup", worst, 0.0, config.divergence_factor * config.projection_tol));
  return rep;
}

InvariantReport check_all(const SnapshotHistory& history, double N0, double mu,
                          const InvariantConfig& config) {
  config.validate();
  InvariantReport rep = check_max_principle(history, N0, config);
  rep.append(check_short_time_bound(history, N0, config));
  rep.append(check_energy(history, config));
  if (history.size() >= 3) {
    rep.append(check_scaling_covariance(history, config.scaling_lambda, mu, config));
  }
  rep.append(check_divergence(history, config));
  return rep;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_invariants_csv(std::ostream& out, const InvariantReport& report) {
  out << "check,value,lower,upper,margin,pass\n";
  for (const CheckRow& r : report.rows) {
    out << r.check << ',' << format_double(r.value) << ',' << format_double(r.lower) << ','
        << format_double(r.upper) << ',' << format_double(r.margin()) << ',' << (r.pass ? 1 : 0)
        << '\n';
  }
}

}  // namespace axns
