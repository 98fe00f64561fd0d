#include "axns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "axns/field_ops.hpp"
#include "axns/operators.hpp"

namespace axns {

void SolverConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("solver.mu must be positive");
  if (dt.has_value() == cfl.has_value()) {
    throw std::invalid_argument("solver: exactly one of dt and cfl must be given");
  }
  if (dt && !(*dt > 0.0)) throw std::invalid_argument("solver.dt must be positive");
  if (cfl && !(*cfl > 0.0 && *cfl <= kMaxCourant)) {
    throw std::invalid_argument("solver.cfl must lie in (0, 0.35]");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("solver.t_end must be positive");
  }
  if (!(projection_tol > 0.0 && projection_tol <= 1e-4)) {
    throw std::invalid_argument("solver.projection_tol must lie in (0, 1e-4]");
  }
  if (snapshot_every < 1) throw std::invalid_argument("solver.snapshot_every must be >= 1");
}

namespace {

void zero_normal_boundary(AxisymField& u) {
  const Grid& g = u.grid;
  for (int j = 0; j <= g.nz; ++j) u.vr(g.nr, j) = 0.0;
  for (int i = 0; i <= g.nr; ++i) {
    u.vz(i, 0) = 0.0;
    u.vz(i, g.nz) = 0.0;
  }
}

}  // namespace

Projection project(const AxisymField& u_star, double dt, PressureSolver& solver, double tol) {
  const Grid& g = u_star.grid;
  ScalarField rhs = projection_divergence(u_star);
  for (double& v : rhs.values.values()) v /= dt;
  Projection out{u_star, solver.solve(rhs, tol)};
  const NodeArray& p = out.pressure.values;
  for (int i = 1; i < g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) out.field.vr(i, j) -= dt * grad_r(g, p, i, j);
  }
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 1; j < g.nz; ++j) out.field.vz(i, j) -= dt * grad_z(g, p, i, j);
  }
  return out;
}

Projection project(const AxisymField& u_star, double dt, double tol) {
  AxisymField u = u_star;
  zero_normal_boundary(u);
  PressureSolver solver(u.grid);
  return project(u, dt, solver, tol);
}

double heun_diffusion_limit(const Grid& g, double mu) {
  return 2.0 / (mu * (4.85 / (g.dr * g.dr) + 4.0 / (g.dz * g.dz)));
}

Solver::Solver(AxisymField initial, SolverConfig config, double t0, BoundaryData boundary,
               bool project_initial)
    : config_(config),
      boundary_(std::move(boundary)),
      state_(std::move(initial)),
      pressure_(state_.grid, ScalarRole::Pressure),
      poisson_(state_.grid),
      t_(t0) {
  config_.validate();
  if (!all_finite(state_)) throw NumericalError("initial state is not finite", t0);
  if (!project_initial) return;
  fill_boundary(state_, t_);
  Projection s0 = project(state_, 1.0, poisson_, config_.projection_tol);
  state_ = std::move(s0.field);
  apply_boundary(state_, t_);
}

Vec3 Solver::boundary_value(double r, double z, double t) const {
  return boundary_ ? boundary_(r, z, t) : Vec3{0.0, 0.0, 0.0};
}

// Boundary values for a stage field before projection: normal components and
// swirl from the data, tangential meridional components copied from the
// adjacent interior node.
void Solver::fill_boundary(AxisymField& u, double t) const {
  const Grid& g = u.grid;
  for (int j = 0; j <= g.nz; ++j) {
    const Vec3 b = boundary_value(g.r_max, g.z(j), t);
    u.vr(g.nr, j) = b[0];
    u.vtheta(g.nr, j) = b[1];
    u.vz(g.nr, j) = u.vz(g.nr - 1, j);
  }
  for (int jb : {0, g.nz}) {
    const int jn = jb == 0 ? 1 : g.nz - 1;
    for (int i = 0; i < g.nr; ++i) {
      const Vec3 b = boundary_value(g.r(i), g.z(jb), t);
      u.vr(i, jb) = i == 0 ? 0.0 : u.vr(i, jn);
      u.vtheta(i, jb) = i == 0 ? 0.0 : b[1];
      u.vz(i, jb) = b[2];
    }
  }
}

void Solver::apply_boundary(AxisymField& u, double t) const {
  const Grid& g = u.grid;
  auto set = [&](int i, int j) {
    const Vec3 b = boundary_value(g.r(i), g.z(j), t);
    u.vr(i, j) = i == 0 ? 0.0 : b[0];
    u.vtheta(i, j) = i == 0 ? 0.0 : b[1];
    u.vz(i, j) = b[2];
  };
  for (int j = 0; j <= g.nz; ++j) set(g.nr, j);
  for (int i = 0; i < g.nr; ++i) {
    set(i, 0);
    set(i, g.nz);
  }
}

AxisymField Solver::rhs(const AxisymField& u) const { return momentum_rhs(u, config_.mu); }

double Solver::next_dt() const {
  if (config_.dt) return *config_.dt;
  const Grid& g = state_.grid;
  const double h = std::min(g.dr, g.dz);
  const double q = std::max(1.0, max_speed(state_).value);
  return 1.0 / (q / (*config_.cfl * h) + config_.mu / (0.2 * h * h));
}

double Solver::stability_number(double dt) const {
  const Grid& g = state_.grid;
  const double h = std::min(g.dr, g.dz);
  const double q = std::max(1.0, max_speed(state_).value);
  return dt * (q / (kMaxCourant * h) + 1.0 / heun_diffusion_limit(g, config_.mu));
}

void Solver::check_dt(double dt) const {
  const Grid& g = state_.grid;
  const double h = std::min(g.dr, g.dz);
  const double q = std::max(1.0, max_speed(state_).value);
  std::ostringstream msg;
  if (!(dt > 0.0)) {
    msg << "time step " << dt << " is not positive";
  } else if (dt * q > h * (1.0 + 1e-12)) {
    msg << "time step " << dt << " exceeds the advective limit " << h / q << " at t=" << t_;
  } else if (dt > 0.25 * h * h / config_.mu * (1.0 + 1e-12)) {
    msg << "time step " << dt << " exceeds the diffusive limit " << 0.25 * h * h / config_.mu;
  } else if (stability_number(dt) > 1.0 + 1e-12) {
    msg << "time step " << dt << " leaves the Heun stability region (combined number "
        << stability_number(dt) << " > 1) at t=" << t_;
  } else {
    return;
  }
  throw CflError(msg.str());
}

void Solver::step(double dt) {
  check_dt(dt);
  const double tol = config_.projection_tol;
  const double t1 = t_ + dt;

  AxisymField u1 = combine(1.0, state_, dt, rhs(state_));
  fill_boundary(u1, t1);
  Projection s1 = project(u1, dt, poisson_, tol);
  apply_boundary(s1.field, t1);

  AxisymField u2 = combine(0.5, state_, 0.5, s1.field);
  {
    const AxisymField f1 = rhs(s1.field);
    u2 = combine(1.0, u2, 0.5 * dt, f1);
  }
  fill_boundary(u2, t1);
  Projection s2 = project(u2, 0.5 * dt, poisson_, tol);
  apply_boundary(s2.field, t1);

  if (!all_finite(s2.field)) {
    std::ostringstream msg;
    msg << "non-finite velocity after the step ending at t=" << t1;
    throw NumericalError(msg.str(), t1);
  }
  state_ = std::move(s2.field);
  auto pv = pressure_.values.values();
  auto a = s1.pressure.values.values();
  auto b = s2.pressure.values.values();
  for (std::size_t k = 0; k < pv.size(); ++k) pv[k] = 0.5 * (a[k] + b[k]);
  t_ = t1;
  ++steps_;
}

void Solver::advance(double t_end, const std::function<void(const Solver&)>& on_step) {
  while (t_ < t_end) {
    double dt = next_dt();
    const double remaining = t_end - t_;
    if (dt >= remaining * (1.0 - 1e-12)) {
      dt = remaining;
    } else if (dt > 0.5 * remaining) {
      // Two nearly equal steps instead of a full step and a sliver.
      dt = 0.5 * remaining;
    }
    step(dt);
    if (t_end - t_ <= 1e-14 * std::max(1.0, std::abs(t_end))) t_ = t_end;
    if (on_step) on_step(*this);
  }
}

SnapshotHistory simulate(const AxisymField& initial, const SolverConfig& config,
                         std::size_t capacity, BoundaryData boundary, double t0) {
  SnapshotHistory history(capacity);
  Solver solver(initial, config, t0, std::move(boundary));
  history.note(measure(solver.state(), 0, t0));
  history.push(t0, solver.state(), solver.pressure());
  solver.advance(config.t_end, [&](const Solver& s) {
    history.note(measure(s.state(), s.steps(), s.time()));
    if (s.steps() % config.snapshot_every == 0 || s.time() >= config.t_end) {
      history.push(s.time(), s.state(), s.pressure());
    }
  });
  return history;
}

}  // namespace axns
