#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace see::cli {

/// Target-network rate for one update block of `update_frequency` steps,
/// equivalent to applying `tau_per_timestep` once per step:
/// 1 - (1 - tau_per_timestep)^update_frequency.
double tau_from_per_timestep(double tau_per_timestep, std::uint64_t update_frequency);

/// Inverse of tau_from_per_timestep.
double tau_per_timestep_from(double tau_per_update, std::uint64_t update_frequency);

/// Transitions per exploration batch so that transitions x parameter sets
/// equals the ordinary batch size. Throws ConfigError unless vf_batch
/// divides total_batch.
std::size_t exploration_batch_split(std::size_t total_batch, std::size_t vf_batch);

/// Maps a mean return to the common 0..100 scale: sparse_mountaincar x100,
/// cartpole x0.2, planar_lander x0.5.
double normalized_score(std::string_view env, double mean_return);

}  // namespace see::cli
