#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "axns/history.hpp"

namespace axns {

enum class ZoomMode { A, B };

/// The cube has too few valid samples for the finite differences.
class InsufficientSamplesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string to_string(ZoomMode mode);

/// Candidate point (x0, t0) with x0 = (r0 cos theta0, r0 sin theta0, z0) and
/// its zoom scales. Candidates are reported at theta0 = 0.
struct ZoomParameters {
  ZoomMode mode = ZoomMode::A;
  double t0 = 0.0;
  double r0 = 0.0;
  double z0 = 0.0;
  double Q = 0.0;      ///< |v(x0, t0)|
  double alpha = 0.0;  ///< r0 Q
  double beta = 0.0;   ///< r0 / sqrt(alpha); 0 when alpha = 0
  /// |v(x0,t0)| / sup_{t<=t0} |v| (mode A) or r0 |v(x0,t0)| / sup_{t<=t0} r|v| (mode B).
  double ratio = 0.0;
  double theta0 = 0.0;

  [[nodiscard]] Vec3 x0() const noexcept {
    return theta0 == 0.0 ? Vec3{r0, 0.0, z0} : Vec3{r0 * std::cos(theta0), r0 * std::sin(theta0), z0};
  }

  friend bool operator==(const ZoomParameters&, const ZoomParameters&) = default;
};

/// Fills alpha and beta from r0 and Q.
ZoomParameters make_zoom(ZoomMode mode, double t0, double r0, double z0, double Q, double ratio);

struct MicroscopeConfig {
  double epsilon = 0.5;
  double sigma0 = 2.0;
  double holder_alpha = 0.5;
  double ratio_threshold = 0.25;
  int cube_space = 9;  ///< samples per spatial edge (odd, >= 5)
  int cube_time = 5;   ///< time levels (>= 3)
  Interpolation interpolation = Interpolation::Bilinear;
  /// Cube half-width in rescaled units; defaults to 1 / (sigma0 epsilon).
  std::optional<double> half_width;

  void validate() const;
  [[nodiscard]] double nominal_half_width() const;

  friend bool operator==(const MicroscopeConfig&, const MicroscopeConfig&) = default;
};

/// Rescaled samples v~(x~, t~) = Q^-1 v(x0 + x~ / Q, t0 + t~ / Q^2) on the
/// normalised cube [-L, L]^3 x [-L^2, 0].
///
/// Samples are indexed (k, a, b, c) with k the time level and a, b, c the
/// x1, x2, x3 indices; time level nt - 1 is t~ = 0.
struct CubeSample {
  ZoomParameters zoom;
  double L = 0.0;
  bool capped = false;
  int ns = 0;
  int nt = 0;
  std::vector<Vec3> values;
  std::vector<double> swirl;  ///< Q^-1 v^theta at each sample
  std::vector<std::uint8_t> valid;

  [[nodiscard]] std::size_t index(int k, int a, int b, int c) const noexcept {
    return ((static_cast<std::size_t>(k) * static_cast<std::size_t>(ns) +
             static_cast<std::size_t>(a)) *
                static_cast<std::size_t>(ns) +
            static_cast<std::size_t>(b)) *
               static_cast<std::size_t>(ns) +
           static_cast<std::size_t>(c);
  }
  [[nodiscard]] double dx() const noexcept { return 2.0 * L / (ns - 1); }
  [[nodiscard]] double dt() const noexcept { return L * L / (nt - 1); }
  [[nodiscard]] double x(int a) const noexcept { return -L + a * dx(); }
  [[nodiscard]] double t(int k) const noexcept { return -L * L + k * dt(); }
  [[nodiscard]] const Vec3& center() const { return values.at(index(nt - 1, ns / 2, ns / 2, ns / 2)); }
  [[nodiscard]] double masked_fraction() const;
};

/// Cube built by evaluating f(x~, t~) (and optionally a swirl function) on the
/// normalised grid; every sample is valid. Used for synthetic inputs.
CubeSample sample_function(double L, int ns, int nt, const std::function<Vec3(const Vec3&, double)>& f,
                           const std::function<double(const Vec3&, double)>& swirl = {});

struct ClosenessReport {
  Vec3 c_star{0.0, 0.0, 0.0};  ///< centre value
  Vec3 c_mean{0.0, 0.0, 0.0};  ///< mean over valid samples, for comparison
  double sup_dist = 0.0;       ///< max |v~ - c_star|
  double sup_dist_mean = 0.0;  ///< max |v~ - c_mean|
  double grad_sup = 0.0;       ///< max Frobenius norm of the spatial Jacobian
  double hess_sup = 0.0;       ///< max Frobenius norm of the spatial second derivatives
  double dt_sup = 0.0;         ///< max |d_t v~|
  double holder = 0.0;         ///< parabolic Holder quotients of D^2 v~ and d_t v~
  double total = 0.0;          ///< sup_dist + grad_sup + hess_sup + dt_sup + holder
  double swirl_ratio = 0.0;    ///< max Q^-1 |v^theta|
};

/// Candidate points, one per stored snapshot, whose maximality ratio reaches
/// the threshold. Throws std::invalid_argument on an empty history.
std::vector<ZoomParameters> find_almost_maximal(const SnapshotHistory& history, ZoomMode mode,
                                                double ratio_threshold);

/// Samples the history around the zoom. L is the configured half-width,
/// capped at 0.5 Q r0 so the cube stays off the axis (flagged in `capped`).
/// Samples outside the grid or the stored time span are masked. Throws
/// std::invalid_argument when Q = 0 or the capped cube is degenerate, and
/// std::runtime_error when every sample is masked.
CubeSample rescale_history(const SnapshotHistory& history, const ZoomParameters& zoom,
                           const MicroscopeConfig& config);

/// Discrete C^{2,1,alpha} distance to the centre value. Throws
/// InsufficientSamplesError unless there are at least 5 valid positions along
/// each spatial axis, 3 valid time levels and a valid centre.
ClosenessReport constant_closeness(const CubeSample& sample, const MicroscopeConfig& config);

/// max over valid samples of Q^-1 |v^theta|.
double swirl_smallness(const CubeSample& sample);

struct MicroscopeRow {
  ZoomParameters zoom;
  double L = 0.0;
  bool capped = false;
  double masked_fraction = 0.0;
  ClosenessReport closeness;
};

/// Both modes, every qualifying candidate off the axis, sorted by alpha
/// descending. Candidates whose cube lacks time depth (early in the run) are
/// skipped. Throws std::invalid_argument for fewer than two snapshots.
std::vector<MicroscopeRow> microscope_report(const SnapshotHistory& history,
                                             const MicroscopeConfig& config);

// Cube file layout (little-endian):
//   char[4] "CUBE", u32 version (= 1)
//   f64 x 12 ns, nt, L, Q, r0, z0, t0, ratio, theta0, mode (0 = A, 1 = B), capped, reserved
//   per sample in index order: f64 v1, v2, v3, swirl, valid
inline constexpr char kCubeMagic[4] = {'C', 'U', 'B', 'E'};

void write_cube(const std::filesystem::path& path, const CubeSample& sample);
CubeSample read_cube(const std::filesystem::path& path);

}  // namespace axns
