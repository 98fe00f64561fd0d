#include "axns/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <sstream>

namespace axns {

std::vector<double> cylindrical_weights(const Grid& g) {
  std::vector<double> w(static_cast<std::size_t>(g.nr + 1));
  w[0] = 0.25 * g.dr;
  for (int i = 1; i <= g.nr; ++i) w[static_cast<std::size_t>(i)] = g.r(i);
  return w;
}

namespace {

// D applied to a radial flux column gr (zero outside [1, nr-1]) and an axial
// flux gz (zero outside [1, nz-1]), evaluated at (i, j).
template <class Gr, class Gz>
double apply_d(const Grid& g, int i, int j, Gr&& gr, Gz&& gz) {
  double dr_part;
  if (i == 0) {
    dr_part = 2.0 * gr(1, j) / g.dr;
  } else {
    dr_part = (g.r(i + 1) * gr(i + 1, j) - g.r(i - 1) * gr(i - 1, j)) / (2.0 * g.dr * g.r(i));
  }
  return dr_part + (gz(i, j + 1) - gz(i, j - 1)) / (2.0 * g.dz);
}

}  // namespace

ScalarField projection_divergence(const AxisymField& u) {
  const Grid& g = u.grid;
  auto gr = [&](int i, int j) { return (i >= 1 && i <= g.nr) ? u.vr(i, j) : 0.0; };
  auto gz = [&](int i, int j) { return (j >= 0 && j <= g.nz) ? u.vz(i, j) : 0.0; };
  ScalarField out(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) out(i, j) = apply_d(g, i, j, gr, gz);
  }
  return out;
}

ScalarField pressure_operator(const ScalarField& p) {
  const Grid& g = p.grid;
  NodeArray gr(g), gz(g);
  for (int i = 1; i < g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) gr(i, j) = (p(i + 1, j) - p(i - 1, j)) / (2.0 * g.dr);
  }
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 1; j < g.nz; ++j) gz(i, j) = (p(i, j + 1) - p(i, j - 1)) / (2.0 * g.dz);
  }
  auto fr = [&](int i, int j) { return (i >= 1 && i < g.nr) ? gr(i, j) : 0.0; };
  auto fz = [&](int i, int j) { return (j >= 1 && j < g.nz) ? gz(i, j) : 0.0; };
  ScalarField out(g);
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j <= g.nz; ++j) out(i, j) = apply_d(g, i, j, fr, fz);
  }
  return out;
}

struct PressureSolver::Impl {
  Grid g;
  std::vector<double> w;
  // Per z-parity class: number of nodes, transform buffer and DCT plans.
  struct ZClass {
    int first = 0;
    int count = 0;
    double* buf = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<double> eigen;
  };
  ZClass zc[2];
  std::vector<double> diag, upper, rhs, sol, dp;

  explicit Impl(const Grid& grid) : g(grid), w(cylindrical_weights(grid)) {
    const int rows = g.nr + 1;
    for (int b = 0; b < 2; ++b) {
      ZClass& c = zc[b];
      c.first = b;
      c.count = (g.nz - b) / 2 + 1;
      c.buf = fftw_alloc_real(static_cast<std::size_t>(rows) * static_cast<std::size_t>(c.count));
      int n[1] = {c.count};
      fftw_r2r_kind fwd[1] = {FFTW_REDFT10};
      fftw_r2r_kind bwd[1] = {FFTW_REDFT01};
      // FFTW_ESTIMATE keeps the chosen algorithm, and thus rounding, identical
      // from run to run.
      c.forward = fftw_plan_many_r2r(1, n, rows, c.buf, nullptr, 1, c.count, c.buf, nullptr, 1,
                                     c.count, fwd, FFTW_ESTIMATE);
      c.backward = fftw_plan_many_r2r(1, n, rows, c.buf, nullptr, 1, c.count, c.buf, nullptr, 1,
                                      c.count, bwd, FFTW_ESTIMATE);
      c.eigen.resize(static_cast<std::size_t>(c.count));
      for (int k = 0; k < c.count; ++k) {
        const double s = std::sin(std::numbers::pi * k / (2.0 * c.count));
        c.eigen[static_cast<std::size_t>(k)] = -(s * s) / (g.dz * g.dz);
      }
    }
    const std::size_t n = static_cast<std::size_t>(g.nr / 2 + 2);
    diag.resize(n);
    upper.resize(n);
    rhs.resize(n);
    sol.resize(n);
    dp.resize(n);
  }

  ~Impl() {
    for (auto& c : zc) {
      if (c.forward) fftw_destroy_plan(c.forward);
      if (c.backward) fftw_destroy_plan(c.backward);
      if (c.buf) fftw_free(c.buf);
    }
  }

  // Solves (A + lambda W) x = W f on radial chain `a` for transformed column
  // `k` of class c, in place in c.buf. A is the weighted radial operator with
  // edge conductances r_{i+1} / (4 dr^2) between nodes i and i + 2.
  void radial_chain(ZClass& c, int k, int a, double lambda) {
    const int n = (g.nr - a) / 2 + 1;
    const double inv = 1.0 / (4.0 * g.dr * g.dr);
    auto node = [&](int s) { return a + 2 * s; };
    auto value = [&](int s) -> double& {
      return c.buf[static_cast<std::size_t>(node(s)) * static_cast<std::size_t>(c.count) +
                   static_cast<std::size_t>(k)];
    };
    for (int s = 0; s < n; ++s) {
      const double left = s > 0 ? g.r(node(s) - 1) * inv : 0.0;
      const double right = s + 1 < n ? g.r(node(s) + 1) * inv : 0.0;
      const double ws = w[static_cast<std::size_t>(node(s))];
      diag[static_cast<std::size_t>(s)] = -(left + right) + lambda * ws;
      upper[static_cast<std::size_t>(s)] = right;
      rhs[static_cast<std::size_t>(s)] = ws * value(s);
    }
    // The zero mode of A is the constant on the chain; pin the first node.
    const int start = lambda == 0.0 ? 1 : 0;
    if (start == 1) sol[0] = 0.0;
    if (start < n) {
      // Thomas sweep on rows start..n-1 (symmetric, definite).
      std::vector<double>& cp = upper;  // reuse: modified super-diagonal
      double denom = diag[static_cast<std::size_t>(start)];
      cp[static_cast<std::size_t>(start)] = upper[static_cast<std::size_t>(start)] / denom;
      dp[static_cast<std::size_t>(start)] = rhs[static_cast<std::size_t>(start)] / denom;
      for (int s = start + 1; s < n; ++s) {
        const double sub = g.r(node(s) - 1) * inv;
        const auto us = static_cast<std::size_t>(s);
        denom = diag[us] - sub * cp[us - 1];
        cp[us] = upper[us] / denom;
        dp[us] = (rhs[us] - sub * dp[us - 1]) / denom;
      }
      sol[static_cast<std::size_t>(n - 1)] = dp[static_cast<std::size_t>(n - 1)];
      for (int s = n - 2; s >= start; --s) {
        const auto us = static_cast<std::size_t>(s);
        sol[us] = dp[us] - cp[us] * sol[us + 1];
      }
    }
    for (int s = 0; s < n; ++s) value(s) = sol[static_cast<std::size_t>(s)];
  }

  ScalarField direct(const ScalarField& f) {
    ScalarField p(g, ScalarRole::Pressure);
    for (auto& c : zc) {
      for (int i = 0; i <= g.nr; ++i) {
        for (int m = 0; m < c.count; ++m) {
          c.buf[static_cast<std::size_t>(i) * static_cast<std::size_t>(c.count) +
                static_cast<std::size_t>(m)] = f(i, c.first + 2 * m);
        }
      }
      fftw_execute(c.forward);
      for (int k = 0; k < c.count; ++k) {
        const double lambda = c.eigen[static_cast<std::size_t>(k)];
        radial_chain(c, k, 0, lambda);
        radial_chain(c, k, 1, lambda);
      }
      fftw_execute(c.backward);
      const double scale = 1.0 / (2.0 * c.count);
      for (int i = 0; i <= g.nr; ++i) {
        for (int m = 0; m < c.count; ++m) {
          p(i, c.first + 2 * m) =
              scale * c.buf[static_cast<std::size_t>(i) * static_cast<std::size_t>(c.count) +
                            static_cast<std::size_t>(m)];
        }
      }
    }
    return remove_class_means(p);
  }

  ScalarField remove_class_means(ScalarField f) const {
    double sum[2][2] = {{0, 0}, {0, 0}};
    double mass[2][2] = {{0, 0}, {0, 0}};
    for (int i = 0; i <= g.nr; ++i) {
      const double wi = w[static_cast<std::size_t>(i)];
      for (int j = 0; j <= g.nz; ++j) {
        sum[i & 1][j & 1] += wi * f(i, j);
        mass[i & 1][j & 1] += wi;
      }
    }
    for (int i = 0; i <= g.nr; ++i) {
      for (int j = 0; j <= g.nz; ++j) f(i, j) -= sum[i & 1][j & 1] / mass[i & 1][j & 1];
    }
    return f;
  }

  double weighted_norm(const ScalarField& f) const {
    double s = 0.0;
    for (int i = 0; i <= g.nr; ++i) {
      double row = 0.0;
      for (int j = 0; j <= g.nz; ++j) row += f(i, j) * f(i, j);
      s += w[static_cast<std::size_t>(i)] * row;
    }
    return std::sqrt(s);
  }
};

PressureSolver::PressureSolver(const Grid& g) : impl_(std::make_unique<Impl>(g)) {}
PressureSolver::~PressureSolver() = default;
PressureSolver::PressureSolver(PressureSolver&&) noexcept = default;
PressureSolver& PressureSolver::operator=(PressureSolver&&) noexcept = default;

const Grid& PressureSolver::grid() const noexcept { return impl_->g; }

ScalarField PressureSolver::compatible(const ScalarField& rhs) const {
  return impl_->remove_class_means(rhs);
}

ScalarField PressureSolver::apply(const ScalarField& p) const { return pressure_operator(p); }

double PressureSolver::relative_residual(const ScalarField& p, const ScalarField& f) const {
  const double fn = impl_->weighted_norm(f);
  if (fn == 0.0) return 0.0;
  ScalarField r = pressure_operator(p);
  auto rv = r.values.values();
  auto fv = f.values.values();
  for (std::size_t k = 0; k < rv.size(); ++k) rv[k] -= fv[k];
  return impl_->weighted_norm(r) / fn;
}

ScalarField PressureSolver::solve(const ScalarField& rhs, double tol, double* achieved) {
  if (!(rhs.grid == impl_->g)) throw std::invalid_argument("rhs grid does not match solver grid");
  const ScalarField f = compatible(rhs);
  const double fn = impl_->weighted_norm(f);
  if (fn == 0.0) {
    if (achieved) *achieved = 0.0;
    return ScalarField(impl_->g, ScalarRole::Pressure);
  }
  ScalarField p = impl_->direct(f);
  double res = relative_residual(p, f);
  constexpr int kMaxRefinements = 4;
  for (int round = 0; round < kMaxRefinements && res > tol; ++round) {
    ScalarField r = pressure_operator(p);
    auto rv = r.values.values();
    auto fv = f.values.values();
    for (std::size_t k = 0; k < rv.size(); ++k) rv[k] = fv[k] - rv[k];
    const ScalarField delta = impl_->direct(impl_->remove_class_means(r));
    auto pv = p.values.values();
    auto dv = delta.values.values();
    for (std::size_t k = 0; k < pv.size(); ++k) pv[k] += dv[k];
    res = relative_residual(p, f);
  }
  if (achieved) *achieved = res;
  if (res > tol) {
    std::ostringstream msg;
    msg << "pressure solve reached relative residual " << res << " > tol " << tol;
    throw PoissonError(msg.str(), res);
  }
  return p;
}

ScalarField pressure_poisson_solve(const ScalarField& rhs, double tol) {
  PressureSolver solver(rhs.grid);
  return solver.solve(rhs, tol);
}

}  // namespace axns
