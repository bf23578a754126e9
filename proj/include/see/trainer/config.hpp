#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace see::trainer {

enum class Algorithm { see, eps_greedy };
enum class Ablation { none, no_conditioning, no_max_update, no_mixing };

std::string_view to_string(Algorithm a) noexcept;
std::string_view to_string(Ablation a) noexcept;
/// Throw ConfigError on unknown names.
Algorithm parse_algorithm(std::string_view name);
Ablation parse_ablation(std::string_view name);

/// Every knob of one training run. Defaults are the fixed values shared by
/// both methods; use default_config() for the tuned per-method values.
struct RunConfig {
  std::string env = "cartpole";
  Algorithm algorithm = Algorithm::see;
  Ablation ablation = Ablation::none;
  std::uint64_t seed = 0;

  std::uint64_t total_steps = 100000;
  std::uint64_t warm_up_steps = 0;
  std::uint64_t update_frequency = 1;

  std::vector<std::size_t> hidden{256, 256};
  double gamma = 0.99;
  std::size_t batch_size = 128;
  double gradient_clip = 10.0;
  std::size_t replay_capacity = 100000;
  double learning_rate = 1e-3;
  double tau = 1.0;  // exploitation target, per update block

  // epsilon-greedy baseline
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::uint64_t epsilon_decay_steps = 10000;

  // exploration objective
  std::size_t explore_transition_batch = 4;
  std::size_t value_function_batch = 32;
  std::size_t value_function_capacity = 2;
  double explore_gamma = 0.99;
  double explore_learning_rate = 1e-3;
  double explore_tau = 1.0;
  std::size_t probe_count = 12;
  double probe_init_scale = 0.1;
  double mixture = 0.5;

  std::uint64_t eval_interval = 2000;
  std::size_t eval_episodes = 10;

  /// Throws ConfigError describing the first inconsistency found.
  void validate() const;
};

/// Tuned hyperparameters for `algorithm` (identical across environments).
RunConfig default_config(Algorithm algorithm, std::string_view env);

/// Linear decay from start to end over decay_steps, constant afterwards.
double epsilon_at(const RunConfig& config, std::uint64_t step);

}  // namespace see::trainer
