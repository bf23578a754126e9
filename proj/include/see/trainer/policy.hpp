#pragma once

#include <cstddef>
#include <random>
#include <span>

#include "see/agents/targets.hpp"
#include "see/errors.hpp"

namespace see::trainer {

/// argmax_a (1 - mixture) * q[a] + mixture * delta[a], blended in double.
/// Ties go to the lowest index. Consumes no randomness.
std::size_t behavior_action(std::span<const float> q, std::span<const float> delta,
                            double mixture);

/// With probability epsilon a uniformly random action, otherwise the greedy
/// one. Always draws the coin first, and the action only when exploring.
template <class Urbg>
std::size_t eps_greedy_action(std::span<const float> q, double epsilon, Urbg& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, q.size() - 1);
    return pick(rng);
  }
  return agents::argmax<float>(q);
}

}  // namespace see::trainer
