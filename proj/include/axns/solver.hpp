#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "axns/grid.hpp"
#include "axns/history.hpp"
#include "axns/poisson.hpp"

namespace axns {

/// Largest Courant number max(1, Q) dt / h for which Heun's method with
/// second-order upwind advection is stable in two dimensions.
inline constexpr double kMaxCourant = 0.35;

struct SolverConfig {
  double mu = 1.0;
  std::optional<double> dt;
  std::optional<double> cfl = 0.3;
  double t_end = 1.0;
  double projection_tol = 1e-10;
  int snapshot_every = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Time step rejected by the advective or diffusive stability limit.
class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values appeared; carries the time of the failed step.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  [[nodiscard]] double time() const noexcept { return t_; }

 private:
  double t_;
};

/// Velocity prescribed on the far-field nodes as a function of (r, z, t),
/// returning (v^r, v^theta, v^z). An empty function means homogeneous data.
using BoundaryData = std::function<Vec3(double r, double z, double t)>;

struct Projection {
  AxisymField field;
  ScalarField pressure;
};

/// Chorin projection: solves L p = D u* / dt and sets u = u* - dt G p.
/// G acts on every velocity value that is not a normal far-field component,
/// so tangential boundary values are corrected too and the map is an
/// orthogonal projector in the cylindrical weights. Normal far-field
/// components of u* must already hold their boundary values.
Projection project(const AxisymField& u_star, double dt, PressureSolver& solver, double tol);

/// As above with homogeneous far-field data: the normal boundary components
/// (v^r at r_max, v^z at z_min and z_max) are zeroed before projecting.
Projection project(const AxisymField& u_star, double dt, double tol = 1e-10);

/// Largest dt with dt * mu * (4.85 / dr^2 + 4 / dz^2) <= 2, the stability
/// limit of Heun's method for the discrete viscous operator including the
/// axis row.
double heun_diffusion_limit(const Grid& g, double mu);

/// Explicit Heun (RK2) integrator with a projection after each stage.
class Solver {
 public:
  /// The initial field is projected onto the discretely divergence-free
  /// fields unless project_initial is false (used when resuming from a
  /// stored, already projected state).
  Solver(AxisymField initial, SolverConfig config, double t0 = 0.0, BoundaryData boundary = {},
         bool project_initial = true);

  [[nodiscard]] const AxisymField& state() const noexcept { return state_; }
  [[nodiscard]] const ScalarField& pressure() const noexcept { return pressure_; }
  [[nodiscard]] double time() const noexcept { return t_; }
  [[nodiscard]] long steps() const noexcept { return steps_; }
  [[nodiscard]] const SolverConfig& config() const noexcept { return config_; }

  /// Step size for the current state. With cfl set,
  /// 1 / dt = max(1, Q) / (cfl h) + mu / (0.2 h^2) with h = min(dr, dz);
  /// otherwise the fixed dt.
  [[nodiscard]] double next_dt() const;

  /// dt (max(1, Q) / (kMaxCourant h) + 1 / heun_diffusion_limit). Values up to
  /// 1 keep advection and diffusion jointly inside the stability region.
  [[nodiscard]] double stability_number(double dt) const;

  /// Throws CflError when dt violates dt <= h / max(1, Q), dt <= 0.25 h^2 / mu
  /// or stability_number(dt) <= 1.
  void check_dt(double dt) const;

  /// One Heun step of size dt. Throws NumericalError on non-finite values.
  void step(double dt);
  void step() { step(next_dt()); }

  /// Steps until t_end; the last step is shortened to land on t_end.
  /// on_step runs after every step.
  void advance(double t_end, const std::function<void(const Solver&)>& on_step = {});

  void set_step_count(long steps) noexcept { steps_ = steps; }

 private:
  AxisymField rhs(const AxisymField& u) const;
  void fill_boundary(AxisymField& u, double t) const;
  void apply_boundary(AxisymField& u, double t) const;
  [[nodiscard]] Vec3 boundary_value(double r, double z, double t) const;

  SolverConfig config_;
  BoundaryData boundary_;
  AxisymField state_;
  ScalarField pressure_;
  PressureSolver poisson_;
  double t_;
  long steps_ = 0;
};

/// Runs from `initial` at t0 to config.t_end. The history receives the initial
/// state, every snapshot_every-th step and the final state; every step is
/// noted in its diagnostics trace.
SnapshotHistory simulate(const AxisymField& initial, const SolverConfig& config,
                         std::size_t capacity, BoundaryData boundary = {}, double t0 = 0.0);

}  // namespace axns
