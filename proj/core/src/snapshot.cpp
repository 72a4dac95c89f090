#include "flrw_dirac/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace flrw {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated snapshot header");
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const SpinorField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open snapshot for writing: " + path);
  os.write("FDRC", 4);
  put<std::uint32_t>(os, kSnapshotVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.dim));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.n));
  put<double>(os, f.grid.box_length);
  put<double>(os, f.time);
  os.write(reinterpret_cast<const char*>(f.data.data()),
           static_cast<std::streamsize>(f.data.size() * sizeof(cplx)));
  if (!os) throw std::runtime_error("failed writing snapshot: " + path);
}

SpinorField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open snapshot: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "FDRC", 4) != 0)
    throw std::runtime_error("not a snapshot file: " + path);
  if (get<std::uint32_t>(is) != kSnapshotVersion)
    throw std::runtime_error("unsupported snapshot version: " + path);
  Grid g;
  g.dim = static_cast<int>(get<std::uint32_t>(is));
  g.n = static_cast<int>(get<std::uint32_t>(is));
  g.box_length = get<double>(is);
  const double t = get<double>(is);
  SpinorField f(g, t);
  is.read(reinterpret_cast<char*>(f.data.data()),
          static_cast<std::streamsize>(f.data.size() * sizeof(cplx)));
  if (!is) throw std::runtime_error("truncated snapshot payload: " + path);
  return f;
}

}  // namespace flrw
