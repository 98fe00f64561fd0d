#include "axns/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "axns/field_ops.hpp"

namespace axns {

namespace binio {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xffu);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw SnapshotFormatError("truncated file");
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw SnapshotFormatError("truncated file");
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  return std::bit_cast<double>(bits);
}

}  // namespace binio

void write_snapshot(std::ostream& out, const Snapshot& snap) {
  const Grid& g = snap.field.grid;
  out.write(kSnapshotMagic, 4);
  binio::put_u32(out, kSnapshotVersion);
  for (double v : {static_cast<double>(g.nr), static_cast<double>(g.nz), g.r_max, g.z_min,
                   g.z_max, snap.t}) {
    binio::put_f64(out, v);
  }
  ScalarField zero_p;
  const NodeArray* p = &snap.pressure.values;
  if (p->size() != g.size()) {
    zero_p = ScalarField(g, ScalarRole::Pressure);
    p = &zero_p.values;
  }
  for (const NodeArray* a : {&snap.field.vr, &snap.field.vtheta, &snap.field.vz, p}) {
    for (double v : a->values()) binio::put_f64(out, v);
  }
  if (!out) throw std::runtime_error("failed writing snapshot");
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_snapshot(out, snap);
}

Snapshot read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw SnapshotFormatError("truncated header");
  if (std::memcmp(magic, kSnapshotMagic, 4) != 0) throw SnapshotFormatError("bad magic");
  const std::uint32_t version = binio::get_u32(in);
  if (version != kSnapshotVersion) {
    throw SnapshotFormatError("unsupported snapshot version " + std::to_string(version));
  }
  const double nr = binio::get_f64(in);
  const double nz = binio::get_f64(in);
  const double r_max = binio::get_f64(in);
  const double z_min = binio::get_f64(in);
  const double z_max = binio::get_f64(in);
  const double t = binio::get_f64(in);
  if (!(nr == std::floor(nr)) || !(nz == std::floor(nz)) || nr > 1 << 20 || nz > 1 << 20) {
    throw SnapshotFormatError("corrupt grid counts");
  }
  Grid g;
  try {
    g = make_grid(static_cast<int>(nr), static_cast<int>(nz), r_max, z_min, z_max);
  } catch (const std::invalid_argument& e) {
    throw SnapshotFormatError(std::string("corrupt grid: ") + e.what());
  }
  Snapshot snap{t, AxisymField(g), ScalarField(g, ScalarRole::Pressure)};
  for (NodeArray* a : {&snap.field.vr, &snap.field.vtheta, &snap.field.vz, &snap.pressure.values}) {
    for (double& v : a->values()) v = binio::get_f64(in);
  }
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotFormatError("cannot open " + path.string());
  try {
    return read_snapshot(in);
  } catch (const SnapshotFormatError& e) {
    throw SnapshotFormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".axns") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string snapshot_filename(long index) {
  std::ostringstream s;
  s << "snap_" << std::setw(6) << std::setfill('0') << index << ".axns";
  return s.str();
}

}  // namespace axns
