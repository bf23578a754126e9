#include "see/trainer/config.hpp"

#include <algorithm>
#include <cmath>

#include "see/envs/env.hpp"
#include "see/errors.hpp"

namespace see::trainer {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::see: return "see";
    case Algorithm::eps_greedy: return "eps_greedy";
  }
  return "?";
}

std::string_view to_string(Ablation a) noexcept {
  switch (a) {
    case Ablation::none: return "none";
    case Ablation::no_conditioning: return "no_conditioning";
    case Ablation::no_max_update: return "no_max_update";
    case Ablation::no_mixing: return "no_mixing";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "see") return Algorithm::see;
  if (name == "eps_greedy") return Algorithm::eps_greedy;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected see or eps_greedy)");
}

Ablation parse_ablation(std::string_view name) {
  for (Ablation a : {Ablation::none, Ablation::no_conditioning, Ablation::no_max_update,
                     Ablation::no_mixing})
    if (name == to_string(a)) return a;
  throw ConfigError("unknown ablation '" + std::string(name) +
                    "' (expected none, no_conditioning, no_max_update or no_mixing)");
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invalid run config: ") + what);
}

bool unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void RunConfig::validate() const {
  envs::env_spec(env);
  require(total_steps > 0, "total_steps must be positive");
  require(update_frequency > 0, "update_frequency must be positive");
  require(!hidden.empty() && std::all_of(hidden.begin(), hidden.end(), [](auto h) { return h > 0; }),
          "hidden sizes must be positive");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  require(batch_size > 0, "batch_size must be positive");
  require(gradient_clip > 0.0, "gradient_clip must be positive");
  require(replay_capacity > 0, "replay_capacity must be positive");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be positive");
  require(unit(tau), "tau must lie in [0, 1]");
  require(unit(epsilon_start) && unit(epsilon_end), "epsilon values must lie in [0, 1]");
  require(eval_interval > 0, "eval_interval must be positive");
  require(eval_episodes > 0, "eval_episodes must be positive");
  if (algorithm == Algorithm::see) {
    require(explore_transition_batch > 0, "explore_transition_batch must be positive");
    require(value_function_batch > 0, "value_function_batch must be positive");
    require(value_function_capacity > 0, "value_function_capacity must be positive");
    require(explore_gamma >= 0.0 && explore_gamma <= 1.0, "explore_gamma must lie in [0, 1]");
    require(explore_learning_rate > 0.0 && std::isfinite(explore_learning_rate),
            "explore_learning_rate must be positive");
    require(unit(explore_tau), "explore_tau must lie in [0, 1]");
    require(probe_count > 0, "probe_count must be positive");
    require(probe_init_scale >= 0.0, "probe_init_scale must be non-negative");
    require(unit(mixture), "mixture must lie in [0, 1]");
  } else {
    require(ablation == Ablation::none, "ablations apply to the see algorithm only");
  }
}

RunConfig default_config(Algorithm algorithm, std::string_view env) {
  RunConfig c;
  c.env = std::string(env);
  c.algorithm = algorithm;
  if (algorithm == Algorithm::eps_greedy) {
    c.epsilon_end = 0.0929;
    c.epsilon_decay_steps = 5144;
    c.learning_rate = 0.0004;
    c.replay_capacity = 85317;
    c.warm_up_steps = 194;
    c.update_frequency = 63;
    c.tau = 0.3421;
  } else {
    c.explore_transition_batch = 4;
    c.value_function_batch = 32;
    c.explore_gamma = 0.9724;
    c.tau = 0.17;
    c.explore_tau = 0.1622;
    c.learning_rate = 0.0007;
    c.explore_learning_rate = 0.00851;
    c.replay_capacity = 16517;
    c.value_function_capacity = 2;
    c.probe_count = 12;
    c.warm_up_steps = 2829;
    c.mixture = 0.3525;
    c.update_frequency = 21;
  }
  return c;
}

double epsilon_at(const RunConfig& config, std::uint64_t step) {
  if (config.epsilon_decay_steps == 0 || step >= config.epsilon_decay_steps)
    return config.epsilon_end;
  const double frac = static_cast<double>(step) / static_cast<double>(config.epsilon_decay_steps);
  return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * frac;
}

}  // namespace see::trainer
