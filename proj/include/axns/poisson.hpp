#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "axns/grid.hpp"

namespace axns {

class PoissonError : public std::runtime_error {
 public:
  PoissonError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// D applied to a velocity field on every node, with v^r odd across the axis
/// and zero velocity outside the grid. On axis and interior nodes this equals
/// divergence().
ScalarField projection_divergence(const AxisymField& u);

/// Node weights of the cylindrical inner product: dr/4 on the axis, r_i elsewhere.
/// Under these weights the centered gradient is minus the adjoint of D.
std::vector<double> cylindrical_weights(const Grid& g);

/// Solver for L p = f with L = D G, the compatible cylindrical Laplacian.
///
/// L decouples into four parity classes (i mod 2, j mod 2). Along z each class
/// is a Neumann chain diagonalised by a DCT-II; along r each class is a
/// weighted tridiagonal chain. The solve is direct: transform in z, one
/// tridiagonal sweep per mode, transform back. Constants on each parity class
/// span the null space; the rhs is made compatible by removing its weighted
/// class means and the solution is returned with zero weighted class means.
class PressureSolver {
 public:
  explicit PressureSolver(const Grid& g);
  ~PressureSolver();
  PressureSolver(PressureSolver&&) noexcept;
  PressureSolver& operator=(PressureSolver&&) noexcept;
  PressureSolver(const PressureSolver&) = delete;
  PressureSolver& operator=(const PressureSolver&) = delete;

  [[nodiscard]] const Grid& grid() const noexcept;

  /// Relative weighted residual ||L p - f|| / ||f|| <= tol, with f the
  /// compatible part of rhs. Throws PoissonError with the achieved residual
  /// when refinement cannot reach tol.
  ScalarField solve(const ScalarField& rhs, double tol, double* achieved = nullptr);

  [[nodiscard]] ScalarField apply(const ScalarField& p) const;

  /// rhs minus its weighted mean on each parity class.
  [[nodiscard]] ScalarField compatible(const ScalarField& rhs) const;

  /// Weighted residual ||L p - f|| / ||f|| (0 when f = 0).
  [[nodiscard]] double relative_residual(const ScalarField& p, const ScalarField& f) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around PressureSolver.
ScalarField pressure_poisson_solve(const ScalarField& rhs, double tol);

/// Applies the discrete operator L = D G.
ScalarField pressure_operator(const ScalarField& p);

}  // namespace axns
