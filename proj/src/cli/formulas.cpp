#include "see/cli/formulas.hpp"

#include <cmath>
#include <string>

#include "see/errors.hpp"

namespace see::cli {

double tau_from_per_timestep(double tau_per_timestep, std::uint64_t update_frequency) {
  if (!(tau_per_timestep >= 0.0 && tau_per_timestep < 1.0))
    throw ConfigError("tau_per_timestep must lie in [0, 1)");
  if (update_frequency == 0) throw ConfigError("update_frequency must be positive");
  return 1.0 - std::pow(1.0 - tau_per_timestep, static_cast<double>(update_frequency));
}

double tau_per_timestep_from(double tau_per_update, std::uint64_t update_frequency) {
  if (!(tau_per_update >= 0.0 && tau_per_update < 1.0))
    throw ConfigError("tau_per_update must lie in [0, 1)");
  if (update_frequency == 0) throw ConfigError("update_frequency must be positive");
  return 1.0 - std::pow(1.0 - tau_per_update, 1.0 / static_cast<double>(update_frequency));
}

std::size_t exploration_batch_split(std::size_t total_batch, std::size_t vf_batch) {
  if (total_batch == 0 || vf_batch == 0) throw ConfigError("batch sizes must be positive");
  if (total_batch % vf_batch != 0)
    throw ConfigError("value_function_batch (" + std::to_string(vf_batch) +
                      ") does not divide batch_size (" + std::to_string(total_batch) + ")");
  return total_batch / vf_batch;
}

double normalized_score(std::string_view env, double mean_return) {
  if (env == "sparse_mountaincar") return 100.0 * mean_return;
  if (env == "cartpole") return 0.2 * mean_return;
  if (env == "planar_lander") return 0.5 * mean_return;
  throw ConfigError("no score normalization for environment '" + std::string(env) + "'");
}

}  // namespace see::cli
