#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "axns/history.hpp"

namespace axns {

class SnapshotFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Snapshot file layout (all little-endian):
//   char[4]  magic "AXNS"
//   u32      version (= 1)
//   f64 x 6  nr, nz, r_max, z_min, z_max, t
//   f64 x N  vr, vtheta, vz, p with N = (nr+1)(nz+1) each, row-major with the
//            radial index outermost
inline constexpr char kSnapshotMagic[4] = {'A', 'X', 'N', 'S'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const Snapshot& snap);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Snapshot files (*.axns) in a directory, sorted by name.
std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir);

/// Zero-padded file name for the k-th written snapshot.
std::string snapshot_filename(long index);

namespace binio {
void put_u32(std::ostream& out, std::uint32_t v);
void put_f64(std::ostream& out, double v);
std::uint32_t get_u32(std::istream& in);
double get_f64(std::istream& in);
}  // namespace binio

}  // namespace axns
