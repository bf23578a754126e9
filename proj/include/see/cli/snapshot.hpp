#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace see::cli {

enum class SnapshotKind : std::uint32_t { exploitation = 0, exploration = 1 };

/// Network parameters plus the metadata needed to rebuild the network.
///
/// File layout (little-endian):
///   char[8]  "SEEPARAM"
///   u32      layout version (1)
///   u32      kind (0 exploitation, 1 exploration)
///   char[32] environment name, NUL padded
///   u64      obs_dim, action_count, hidden layer count, hidden sizes...
///   u64      probe_count (0 for exploitation)
///   u64      probe_offset: index of the first probe-state value (equal to
///            the value count for exploitation)
///   u64      value count
///   f32      values (MLP layout, then probe states [probe_count x obs_dim])
struct SnapshotFile {
  SnapshotKind kind = SnapshotKind::exploitation;
  std::string env;
  std::size_t obs_dim = 0;
  std::size_t action_count = 0;
  std::vector<std::size_t> hidden;
  std::size_t probe_count = 0;
  std::size_t probe_offset = 0;
  std::vector<float> values;

  bool operator==(const SnapshotFile&) const = default;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void save_snapshot(const std::filesystem::path& path, const SnapshotFile& snapshot);
/// Throws ConfigError on a malformed or truncated file.
SnapshotFile load_snapshot(const std::filesystem::path& path);

}  // namespace see::cli
