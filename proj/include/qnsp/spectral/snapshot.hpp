#pragma once

// Field snapshot container (version 1), all integers and doubles little-endian:
//
//   offset  size        content
//   0       8           magic "QNSPSNAP"
//   8       1           version (= 1)
//   9       1           dim (1..3)
//   10      1           component count c (1 for scalars, dim for vectors)
//   11      4*dim       points per axis, uint32
//   ..      8           box length, IEEE-754 double
//   ..      8*c*n^dim   component-major, then row-major (last axis fastest)
//                       physical-space values, IEEE-754 double

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "qnsp/errors.hpp"
#include "qnsp/spectral/field.hpp"

namespace qnsp {

inline constexpr std::array<char, 8> kSnapshotMagic{'Q', 'N', 'S', 'P', 'S', 'N', 'A', 'P'};
inline constexpr std::uint8_t kSnapshotVersion = 1;

struct Snapshot {
  Grid grid;
  std::vector<ScalarField> components;

  ScalarField scalar() const {
    if (components.size() != 1) throw UsageError("snapshot does not hold a scalar field");
    return components.front();
  }
  VectorField vector() const {
    if (static_cast<int>(components.size()) != grid.dim())
      throw UsageError("snapshot does not hold a vector field");
    return VectorField(components);
  }
};

namespace detail {

template <class T>
void put_le(std::vector<unsigned char>& buf, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <class T>
T get_le(const std::vector<unsigned char>& buf, std::size_t& pos, const std::string& path) {
  if (pos + sizeof(T) > buf.size()) throw IoError("truncated snapshot", path);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, buf.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

inline void write_components(const std::string& path, const std::vector<const ScalarField*>& comps) {
  const Grid& g = comps.front()->grid();
  std::vector<unsigned char> buf(kSnapshotMagic.begin(), kSnapshotMagic.end());
  buf.push_back(kSnapshotVersion);
  buf.push_back(static_cast<unsigned char>(g.dim()));
  buf.push_back(static_cast<unsigned char>(comps.size()));
  for (int a = 0; a < g.dim(); ++a) put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.points()));
  put_le<double>(buf, g.box_length());
  for (const auto* c : comps)
    for (double v : c->to_physical()) put_le<double>(buf, v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open snapshot for writing", path);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing snapshot", path);
}

}  // namespace detail

inline void write_snapshot(const std::string& path, const ScalarField& f) {
  detail::write_components(path, {&f});
}

inline void write_snapshot(const std::string& path, const VectorField& v) {
  std::vector<const ScalarField*> comps;
  for (const auto& c : v) comps.push_back(&c);
  detail::write_components(path, comps);
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot", path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 11 || !std::equal(kSnapshotMagic.begin(), kSnapshotMagic.end(), buf.begin()))
    throw IoError("not a field snapshot (bad magic)", path);
  std::size_t pos = 8;
  const auto version = buf[pos++];
  if (version != kSnapshotVersion) throw IoError("unsupported snapshot version " + std::to_string(version), path);
  const int dim = buf[pos++];
  const int ncomp = buf[pos++];
  if (dim < 1 || dim > 3 || ncomp < 1) throw IoError("corrupt snapshot header", path);
  std::vector<std::uint32_t> sizes(dim);
  for (auto& s : sizes) s = detail::get_le<std::uint32_t>(buf, pos, path);
  for (auto s : sizes)
    if (s != sizes.front()) throw IoError("anisotropic snapshot grids are not supported", path);
  const double box = detail::get_le<double>(buf, pos, path);

  Snapshot snap;
  snap.grid = make_grid(dim, static_cast<int>(sizes.front()), box);
  const std::size_t count = snap.grid.phys_size();
  if (buf.size() - pos != 8 * count * static_cast<std::size_t>(ncomp))
    throw IoError("snapshot payload size does not match header", path);
  for (int c = 0; c < ncomp; ++c) {
    std::vector<double> values(count);
    for (auto& v : values) v = detail::get_le<double>(buf, pos, path);
    snap.components.push_back(ScalarField::from_physical(snap.grid, values));
  }
  return snap;
}

}  // namespace qnsp
