#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "see/agents/exploration_network.hpp"
#include "see/agents/q_network.hpp"
#include "see/fncore/optim.hpp"
#include "see/replay/replay.hpp"

namespace see::agents {

struct ExploreConfig {
  std::size_t obs_dim = 0;
  std::size_t action_count = 0;
  std::size_t probe_count = 12;
  std::vector<std::size_t> exploit_hidden{256, 256};
  std::vector<std::size_t> hidden{256, 256};
  double exploit_gamma = 0.99;  // for the TD error that serves as reward
  double gamma = 0.9724;
  double learning_rate = 0.00851;
  double tau = 0.1622;
  double gradient_clip = 10.0;
  bool max_update = true;
  double probe_init_scale = 0.1;
};

/// The exploration objective: predicts the exploitation network's absolute
/// TD error, conditioned on exploitation parameters, and is trained with
/// either the maximum-reward or the ordinary Bellman target.
class ExploreAgent {
 public:
  ExploreAgent(const ExploreConfig& config, std::uint64_t seed);

  const ExploreConfig& config() const noexcept { return config_; }
  const ExplorationNetwork<float>& network() const noexcept { return net_; }
  const QNetwork<float>& exploit_net() const noexcept { return net_.exploit_net(); }

  fncore::ParameterVector<float>& online() noexcept { return online_; }
  const fncore::ParameterVector<float>& online() const noexcept { return online_; }
  fncore::ParameterVector<float>& target() noexcept { return target_; }
  const fncore::ParameterVector<float>& target() const noexcept { return target_; }
  const fncore::AdamState<float>& optimizer() const noexcept { return adam_; }

  /// Fingerprint of exploitation parameters under the online probe states.
  std::vector<float> embed(std::span<const float> theta) const;

  /// Online predictions for one state given a precomputed fingerprint.
  std::vector<float> delta_values(std::span<const float> embedding,
                                  std::span<const float> state) const;

  /// Absolute TD error of `theta` on one transition.
  float exploration_reward(std::span<const float> theta, const replay::Transition& t) const;

  /// Regression target for one transition. Action selection at s' uses the
  /// online parameters, evaluation the target parameters.
  float exploration_target(const replay::Transition& t, std::span<const float> theta,
                           float reward) const;

  /// One clipped Adam step on the mean squared error over every
  /// (transition, snapshot) pair. Snapshots that occur several times in
  /// `snapshots` are evaluated once and weighted by their multiplicity, which
  /// yields the same loss and gradient as the full cross product. Returns the
  /// loss before the step.
  float update(const replay::TransitionBatch& batch,
               std::span<const replay::ParameterSnapshot> snapshots);

  void update_target();

 private:
  ExploreConfig config_;
  ExplorationNetwork<float> net_;
  fncore::ParameterVector<float> online_;
  fncore::ParameterVector<float> target_;
  fncore::AdamState<float> adam_;
  std::vector<float> grad_;
  mutable fncore::ForwardTrace<float> trace_;
};

}  // namespace see::agents
