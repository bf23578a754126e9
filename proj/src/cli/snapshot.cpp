#include "see/cli/snapshot.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "see/errors.hpp"

namespace see::cli {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'E', 'P', 'A', 'R', 'A', 'M'};
constexpr std::size_t kNameBytes = 32;
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 34;

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T take(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw ConfigError("truncated snapshot " + path.string());
  return v;
}

}  // namespace

void save_snapshot(const std::filesystem::path& path, const SnapshotFile& s) {
  if (s.env.size() >= kNameBytes) throw ConfigError("snapshot: environment name too long");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.kind));
  std::array<char, kNameBytes> name{};
  std::memcpy(name.data(), s.env.data(), s.env.size());
  out.write(name.data(), name.size());
  put<std::uint64_t>(out, s.obs_dim);
  put<std::uint64_t>(out, s.action_count);
  put<std::uint64_t>(out, s.hidden.size());
  for (auto h : s.hidden) put<std::uint64_t>(out, h);
  put<std::uint64_t>(out, s.probe_count);
  put<std::uint64_t>(out, s.probe_offset);
  put<std::uint64_t>(out, s.values.size());
  out.write(reinterpret_cast<const char*>(s.values.data()),
            static_cast<std::streamsize>(s.values.size() * sizeof(float)));
  if (!out) throw ConfigError("failed writing " + path.string());
}

SnapshotFile load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw ConfigError(path.string() + " is not a parameter snapshot");
  if (take<std::uint32_t>(in, path) != kSnapshotVersion)
    throw ConfigError("unsupported snapshot version in " + path.string());
  SnapshotFile s;
  const auto kind = take<std::uint32_t>(in, path);
  if (kind > 1) throw ConfigError("unknown snapshot kind in " + path.string());
  s.kind = static_cast<SnapshotKind>(kind);
  std::array<char, kNameBytes> name{};
  if (!in.read(name.data(), name.size())) throw ConfigError("truncated snapshot " + path.string());
  s.env.assign(name.data(), strnlen(name.data(), name.size()));
  s.obs_dim = take<std::uint64_t>(in, path);
  s.action_count = take<std::uint64_t>(in, path);
  const auto layers = take<std::uint64_t>(in, path);
  if (layers > 64) throw ConfigError("implausible layer count in " + path.string());
  for (std::uint64_t i = 0; i < layers; ++i) s.hidden.push_back(take<std::uint64_t>(in, path));
  s.probe_count = take<std::uint64_t>(in, path);
  s.probe_offset = take<std::uint64_t>(in, path);
  const auto count = take<std::uint64_t>(in, path);
  if (count > kMaxCount || s.probe_offset > count)
    throw ConfigError("implausible value count in " + path.string());
  s.values.resize(count);
  if (!in.read(reinterpret_cast<char*>(s.values.data()),
               static_cast<std::streamsize>(count * sizeof(float))))
    throw ConfigError("truncated snapshot " + path.string());
  return s;
}

}  // namespace see::cli
