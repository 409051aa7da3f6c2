#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mckean/errors.hpp"
#include "mckean/spectral/field.hpp"

namespace mckean::spectral {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

/// A field together with the time it belongs to.
struct Snapshot {
  SpectralField field;
  double time = 0.0;
};

/// Binary snapshot container:
///
///   bytes 0-7    magic "MCKFLD01"
///   uint32       d
///   uint32       N
///   uint32       components
///   uint32       reserved (0)
///   float64      L
///   float64      time
///   float64[]    samples, component-major, each component row-major (N^d)
///
/// All integers and floats little-endian.
inline constexpr std::array<char, 8> kSnapshotMagic = {'M', 'C', 'K', 'F', 'L', 'D', '0', '1'};

inline void write_snapshot(std::ostream& os, const SpectralField& f, double time) {
  const std::uint32_t header[4] = {static_cast<std::uint32_t>(f.grid().dim()),
                                   static_cast<std::uint32_t>(f.grid().points()),
                                   static_cast<std::uint32_t>(f.components()), 0u};
  const double reals[2] = {f.grid().length(), time};
  os.write(kSnapshotMagic.data(), kSnapshotMagic.size());
  os.write(reinterpret_cast<const char*>(header), sizeof(header));
  os.write(reinterpret_cast<const char*>(reals), sizeof(reals));
  auto v = f.values();
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!os) throw std::runtime_error("failed writing field snapshot");
}

inline Snapshot read_snapshot(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kSnapshotMagic) throw UsageError("not a field snapshot container (bad magic)");
  std::uint32_t header[4];
  double reals[2];
  is.read(reinterpret_cast<char*>(header), sizeof(header));
  is.read(reinterpret_cast<char*>(reals), sizeof(reals));
  if (!is) throw UsageError("truncated snapshot header");
  Grid grid(static_cast<int>(header[0]), static_cast<int>(header[1]), reals[0]);
  const int comps = static_cast<int>(header[2]);
  if (comps < 1 || comps > 2) throw UsageError("snapshot has unsupported component count");
  std::vector<double> vals(grid.size() * comps);
  is.read(reinterpret_cast<char*>(vals.data()), static_cast<std::streamsize>(vals.size() * sizeof(double)));
  if (!is) throw UsageError("truncated snapshot samples");
  return {SpectralField::from_values(grid, comps, std::move(vals)), reals[1]};
}

inline void save_snapshot(const std::filesystem::path& path, const SpectralField& f, double time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_snapshot(os, f, time);
}

inline Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("cannot open snapshot " + path.string());
  return read_snapshot(is);
}

/// CSV export: header row, then one node per row with its coordinates
/// followed by the component values.
inline void write_csv(std::ostream& os, const SpectralField& f) {
  const Grid& g = f.grid();
  os << (g.dim() == 1 ? "x" : "x,y");
  for (int c = 0; c < f.components(); ++c) os << ",v" << c;
  os << '\n';
  os << std::setprecision(17);
  for (std::size_t n = 0; n < g.size(); ++n) {
    for (int a = 0; a < g.dim(); ++a) os << (a ? "," : "") << g.coordinate(n, a);
    for (int c = 0; c < f.components(); ++c) os << ',' << f.values(c)[n];
    os << '\n';
  }
}

} // namespace mckean::spectral
