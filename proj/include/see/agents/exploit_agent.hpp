#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "see/agents/q_network.hpp"
#include "see/fncore/optim.hpp"
#include "see/replay/replay.hpp"

namespace see::agents {

struct ExploitConfig {
  std::size_t obs_dim = 0;
  std::size_t action_count = 0;
  std::vector<std::size_t> hidden{256, 256};
  double gamma = 0.99;
  double learning_rate = 4e-4;
  double tau = 1.0;
  double gradient_clip = 10.0;
};

/// Dueling double DQN: online parameters, a Polyak-averaged target copy and
/// an Adam optimizer. Not thread-safe (cached forward buffers); evaluation
/// code should work from parameter copies.
class ExploitAgent {
 public:
  ExploitAgent(const ExploitConfig& config, std::uint64_t seed);

  const ExploitConfig& config() const noexcept { return config_; }
  const QNetwork<float>& network() const noexcept { return net_; }

  fncore::ParameterVector<float>& online() noexcept { return online_; }
  const fncore::ParameterVector<float>& online() const noexcept { return online_; }
  fncore::ParameterVector<float>& target() noexcept { return target_; }
  const fncore::ParameterVector<float>& target() const noexcept { return target_; }
  const fncore::AdamState<float>& optimizer() const noexcept { return adam_; }

  std::vector<float> q_values(std::span<const float> params, std::span<const float> state) const;
  std::size_t greedy_action(std::span<const float> params, std::span<const float> state) const;
  std::size_t greedy_action(std::span<const float> state) const {
    return greedy_action(online_.span(), state);
  }

  /// Regression target of one transition with the current online/target
  /// parameters.
  float double_dqn_target(const replay::Transition& t) const;
  std::vector<float> double_dqn_targets(const replay::TransitionBatch& batch) const;

  /// Mean squared TD loss over the batch followed by one clipped Adam step on
  /// the online parameters. Returns the loss before the step. The target
  /// parameters are not touched.
  float update(const replay::TransitionBatch& batch);

  /// Polyak step of the target towards the online parameters with config.tau.
  void update_target();

 private:
  ExploitConfig config_;
  QNetwork<float> net_;
  fncore::ParameterVector<float> online_;
  fncore::ParameterVector<float> target_;
  fncore::AdamState<float> adam_;

  mutable fncore::ForwardTrace<float> trace_;
  mutable fncore::ForwardTrace<float> scratch_trace_;
  std::vector<float> grad_;
};

}  // namespace see::agents
