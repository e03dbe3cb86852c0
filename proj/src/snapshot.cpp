#include "bwm/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "bwm/error.hpp"

namespace bwm {

namespace {

constexpr char kMagic[4] = {'B', 'W', 'M', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error("snapshot truncated");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const std::string& path, const SimulationState& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write(kMagic, 4);
  const Grid& g = s.u.grid();
  put_le<std::uint64_t>(os, g.dim);
  put_le<std::uint64_t>(os, g.points_per_axis);
  put_le<std::uint64_t>(os, s.u.ncomp());
  put_le<double>(os, s.time);
  for (double v : s.u.values()) put_le<double>(os, v);
  for (double v : s.ut.values()) put_le<double>(os, v);
  if (!os) throw Error("write to " + path + " failed");
}

SimulationState read_snapshot(const std::string& path, double length) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(path + " is not a BWM1 snapshot");
  }
  const auto n = get_le<std::uint64_t>(is);
  const auto M = get_le<std::uint64_t>(is);
  const auto L = get_le<std::uint64_t>(is);
  if (L < 1 || L > std::uint64_t(kMaxAmbient)) throw Error("bad component count");
  const Grid g = Grid::make(int(n), int(M), length);
  SimulationState s;
  s.time = get_le<double>(is);
  std::vector<double> u(g.num_points() * L), ut(g.num_points() * L);
  for (double& v : u) v = get_le<double>(is);
  for (double& v : ut) v = get_le<double>(is);
  s.u = GridField(g, int(L), std::move(u));
  s.ut = GridField(g, int(L), std::move(ut));
  return s;
}

}  // namespace bwm
