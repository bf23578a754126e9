#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "see/cli/config_file.hpp"
#include "see/trainer/trainer.hpp"

namespace see::cli {

struct RunFiles {
  std::filesystem::path curve;     // <label>_seed<N>.csv
  std::filesystem::path config;    // <label>_seed<N>.config.json
  std::filesystem::path exploit;   // <label>_seed<N>.theta.bin
  std::filesystem::path explore;   // <label>_seed<N>.omega.bin (see only)
};

RunFiles run_files(const std::filesystem::path& dir, const std::string& label, std::uint64_t seed);

/// Trains one run and writes its curve, resolved-config sidecar and final
/// parameter snapshots. Progress goes to stderr unless `quiet`.
RunFiles train_to_files(const ResolvedConfig& config, const std::filesystem::path& dir,
                        const std::string& label, bool quiet);

/// Entry point of the `see` tool. Exit codes: 0 success, 1 usage or
/// configuration error, 2 training divergence.
int run_command(int argc, const char* const* argv);
int run_command(const std::vector<std::string>& args);

}  // namespace see::cli
