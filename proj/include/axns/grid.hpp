#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace axns {

using Vec3 = std::array<double, 3>;

/// Uniform node grid on the meridional half-plane (r, z).
///
/// There are (nr + 1) x (nz + 1) nodes. Node (i, j) sits at r = i * dr,
/// z = z_min + j * dz, so the axis r = 0 is the grid line i = 0. Arrays over
/// the nodes are stored row-major with the radial index outermost.
struct Grid {
  int nr = 0;
  int nz = 0;
  double r_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  double dr = 0.0;
  double dz = 0.0;

  [[nodiscard]] int nodes_r() const noexcept { return nr + 1; }
  [[nodiscard]] int nodes_z() const noexcept { return nz + 1; }
  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(nr + 1) * static_cast<std::size_t>(nz + 1);
  }
  [[nodiscard]] std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(nz + 1) +
           static_cast<std::size_t>(j);
  }
  [[nodiscard]] double r(int i) const noexcept { return i * dr; }
  [[nodiscard]] double z(int j) const noexcept { return z_min + j * dz; }
  [[nodiscard]] bool is_far_field(int i, int j) const noexcept {
    return i == nr || j == 0 || j == nz;
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Throws std::invalid_argument for counts below 8 or nonpositive extents.
Grid make_grid(int nr, int nz, double r_max, double z_min, double z_max);

/// Node array with (i, j) access.
class NodeArray {
 public:
  NodeArray() = default;
  explicit NodeArray(const Grid& g, double fill = 0.0)
      : stride_(g.nz + 1), data_(g.size(), fill) {}

  double& operator()(int i, int j) noexcept {
    return data_[static_cast<std::size_t>(i) * stride_ + static_cast<std::size_t>(j)];
  }
  double operator()(int i, int j) const noexcept {
    return data_[static_cast<std::size_t>(i) * stride_ + static_cast<std::size_t>(j)];
  }

  [[nodiscard]] std::span<double> values() noexcept { return data_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return data_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

  friend bool operator==(const NodeArray&, const NodeArray&) = default;

 private:
  std::size_t stride_ = 0;
  std::vector<double> data_;
};

/// Cylindrical velocity components (v^r, v^theta, v^z) at one time.
struct AxisymField {
  Grid grid;
  NodeArray vr;
  NodeArray vtheta;
  NodeArray vz;

  AxisymField() = default;
  explicit AxisymField(const Grid& g) : grid(g), vr(g), vtheta(g), vz(g) {}

  [[nodiscard]] double speed(int i, int j) const noexcept {
    const double a = vr(i, j), b = vtheta(i, j), c = vz(i, j);
    return std::sqrt(a * a + b * b + c * c);
  }

  friend bool operator==(const AxisymField&, const AxisymField&) = default;
};

enum class ScalarRole { Generic, Pressure, Streamfunction };

struct ScalarField {
  Grid grid;
  NodeArray values;
  ScalarRole role = ScalarRole::Generic;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, ScalarRole role_ = ScalarRole::Generic)
      : grid(g), values(g), role(role_) {}

  double& operator()(int i, int j) noexcept { return values(i, j); }
  double operator()(int i, int j) const noexcept { return values(i, j); }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;
};

/// Local orthonormal basis (e_r, e_theta, e_z) at a Cartesian point off the axis.
struct CylindricalFrame {
  double r = 0.0;
  Vec3 e_r{1.0, 0.0, 0.0};
  Vec3 e_theta{0.0, 1.0, 0.0};
  Vec3 e_z{0.0, 0.0, 1.0};

  /// At r = 0 the radial and angular directions are undefined; the frame falls
  /// back to the x1/x2 axes.
  static CylindricalFrame at(const Vec3& x) noexcept {
    CylindricalFrame f;
    f.r = std::hypot(x[0], x[1]);
    if (f.r > 0.0) {
      f.e_r = {x[0] / f.r, x[1] / f.r, 0.0};
      f.e_theta = {-x[1] / f.r, x[0] / f.r, 0.0};
    }
    return f;
  }

  [[nodiscard]] Vec3 to_cartesian(double vr, double vtheta, double vz) const noexcept {
    return {vr * e_r[0] + vtheta * e_theta[0], vr * e_r[1] + vtheta * e_theta[1], vz};
  }
};

inline double norm(const Vec3& v) noexcept {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

inline double dot(const Vec3& a, const Vec3& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace axns
