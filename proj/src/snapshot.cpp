#include "sincmbe/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sincmbe {

// The format is little-endian; this implementation writes native byte order.
static_assert(std::endian::native == std::endian::little,
              "snapshot format requires a little-endian host");

namespace {

constexpr char kMagic[4] = {'M', 'B', 'E', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) {
    throw std::runtime_error(path + ": truncated snapshot (" + what + ")");
  }
  return v;
}

}  // namespace

void write_snapshot(const RealField& field, std::int64_t step, double time,
                    const std::string& path) {
  if (step < 0) {
    throw std::invalid_argument("write_snapshot: step must be >= 0");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error(path + ": cannot open for writing");
  }
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid().nx));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid().ny));
  put<double>(out, time);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(step));
  out.write(reinterpret_cast<const char*>(field.data()),
            static_cast<std::streamsize>(sizeof(double)) * field.size());
  if (!out) {
    throw std::runtime_error(path + ": write failed");
  }
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + ": not a MBEF snapshot (bad magic)");
  }
  const auto version = get<std::uint32_t>(in, path, "version");
  if (version != kVersion) {
    throw std::runtime_error(path + ": unsupported snapshot version " +
                             std::to_string(version));
  }
  const auto nx = get<std::uint32_t>(in, path, "nx");
  const auto ny = get<std::uint32_t>(in, path, "ny");
  GridSpec grid;
  try {
    grid = GridSpec(static_cast<int>(nx), static_cast<int>(ny));
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  Snapshot snap;
  snap.time = get<double>(in, path, "time");
  snap.step = static_cast<std::int64_t>(get<std::uint64_t>(in, path, "step"));
  snap.field = RealField(grid);
  in.read(reinterpret_cast<char*>(snap.field.data()),
          static_cast<std::streamsize>(sizeof(double)) * snap.field.size());
  if (!in) {
    throw std::runtime_error(path + ": truncated snapshot (payload)");
  }
  return snap;
}

}  // namespace sincmbe
