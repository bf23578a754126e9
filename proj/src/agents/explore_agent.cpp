#include "see/agents/explore_agent.hpp"

#include <algorithm>
#include <cmath>

#include "see/agents/targets.hpp"
#include "see/errors.hpp"

namespace see::agents {

ExploreAgent::ExploreAgent(const ExploreConfig& config, std::uint64_t seed)
    : config_(config),
      net_(QNetwork<float>(config.obs_dim, config.action_count, config.exploit_hidden),
           config.probe_count, config.hidden),
      online_(net_.init(seed, config.probe_init_scale)),
      target_(online_),
      adam_(online_.size(), fncore::AdamConfig{config.learning_rate}),
      grad_(online_.size()) {
  if (!(config.gamma >= 0.0 && config.gamma <= 1.0))
    throw ConfigError("ExploreAgent: gamma must lie in [0, 1]");
  if (!(config.exploit_gamma >= 0.0 && config.exploit_gamma < 1.0))
    throw ConfigError("ExploreAgent: exploitation gamma must lie in [0, 1)");
  if (!(config.learning_rate > 0.0)) throw ConfigError("ExploreAgent: learning rate must be positive");
  if (!(config.tau >= 0.0 && config.tau <= 1.0)) throw ConfigError("ExploreAgent: tau must lie in [0, 1]");
  if (!(config.gradient_clip > 0.0)) throw ConfigError("ExploreAgent: gradient clip must be positive");
}

std::vector<float> ExploreAgent::embed(std::span<const float> theta) const {
  std::vector<float> e;
  net_.embed(online_.span(), theta, e, trace_);
  return e;
}

std::vector<float> ExploreAgent::delta_values(std::span<const float> embedding,
                                              std::span<const float> state) const {
  std::vector<float> out;
  net_.delta_values(online_.span(), embedding, state, 1, out, trace_);
  return out;
}

float ExploreAgent::exploration_reward(std::span<const float> theta,
                                       const replay::Transition& t) const {
  const auto& q = exploit_net();
  const auto q_s = q.q_values(theta, t.state);
  const auto q_next = q.q_values(theta, t.next_state);
  return absolute_td_error<float>(t.reward, static_cast<float>(config_.exploit_gamma),
                                  t.terminated, q_s.at(t.action), q_next);
}

float ExploreAgent::exploration_target(const replay::Transition& t, std::span<const float> theta,
                                       float reward) const {
  if (t.terminated) return reward;
  const auto on = net_.delta_values(online_.span(), t.next_state, theta);
  const auto tg = net_.delta_values(target_.span(), t.next_state, theta);
  return agents::exploration_target<float>(reward, static_cast<float>(config_.gamma), false, on,
                                           tg, config_.max_update);
}

float ExploreAgent::update(const replay::TransitionBatch& batch,
                           std::span<const replay::ParameterSnapshot> snapshots) {
  const std::size_t n = batch.size;
  if (n == 0 || snapshots.empty()) throw UsageError("ExploreAgent::update: empty batch");
  const std::size_t obs = net_.obs_dim();
  const std::size_t actions = net_.action_count();

  // Distinct snapshots with their multiplicities.
  std::vector<const fncore::ParameterVector<float>*> unique;
  std::vector<std::size_t> counts;
  for (const auto& s : snapshots) {
    if (!s) throw UsageError("ExploreAgent::update: null snapshot");
    const auto it = std::find(unique.begin(), unique.end(), s.get());
    if (it == unique.end()) {
      unique.push_back(s.get());
      counts.push_back(1);
    } else {
      ++counts[static_cast<std::size_t>(it - unique.begin())];
    }
  }

  const auto& qnet = exploit_net();
  const float exploit_gamma = static_cast<float>(config_.exploit_gamma);
  const float gamma = static_cast<float>(config_.gamma);
  const float pair_scale = 1.0f / static_cast<float>(n * snapshots.size());

  PairBatch<float> pairs;
  const std::size_t rows = n * unique.size();
  pairs.states.reserve(rows * obs);
  pairs.actions.reserve(rows);
  pairs.snapshot_index.reserve(rows);
  pairs.targets.reserve(rows);
  pairs.weights.reserve(rows);

  std::vector<float> q_s, q_next, e_on, e_tg, d_on, d_tg;
  fncore::ForwardTrace<float> scratch;
  for (std::size_t k = 0; k < unique.size(); ++k) {
    const std::span<const float> theta = unique[k]->span();
    pairs.snapshots.push_back(theta);
    qnet.forward(theta, batch.states, n, scratch, q_s);
    qnet.forward(theta, batch.next_states, n, scratch, q_next);
    net_.embed(online_.span(), theta, e_on, scratch);
    net_.embed(target_.span(), theta, e_tg, scratch);
    net_.delta_values(online_.span(), e_on, batch.next_states, n, d_on, scratch);
    net_.delta_values(target_.span(), e_tg, batch.next_states, n, d_tg, scratch);
    const float weight = static_cast<float>(counts[k]) * pair_scale;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = batch.actions[i];
      const bool terminal = batch.terminated[i] != 0;
      const float r = absolute_td_error<float>(
          batch.rewards[i], exploit_gamma, terminal, q_s[i * actions + a],
          std::span<const float>(q_next.data() + i * actions, actions));
      const float y = agents::exploration_target<float>(
          r, gamma, terminal, std::span<const float>(d_on.data() + i * actions, actions),
          std::span<const float>(d_tg.data() + i * actions, actions), config_.max_update);
      pairs.states.insert(pairs.states.end(), batch.states.begin() + i * obs,
                          batch.states.begin() + (i + 1) * obs);
      pairs.actions.push_back(static_cast<std::uint32_t>(a));
      pairs.snapshot_index.push_back(static_cast<std::uint32_t>(k));
      pairs.targets.push_back(y);
      pairs.weights.push_back(weight);
    }
  }

  std::fill(grad_.begin(), grad_.end(), 0.0f);
  const float loss = net_.weighted_loss(online_.span(), pairs, grad_);
  if (!std::isfinite(loss))
    throw DivergenceError("exploration loss is not finite", adam_.step_count + 1);
  if (!fncore::all_finite<float>(grad_))
    throw DivergenceError("exploration gradient is not finite", adam_.step_count + 1);
  fncore::clip_gradients<float>(grad_, static_cast<float>(config_.gradient_clip));
  fncore::adam_step<float>(adam_, online_.span(), grad_);
  return loss;
}

void ExploreAgent::update_target() {
  fncore::polyak_update<float>(target_.span(), online_.span(), config_.tau);
}

}  // namespace see::agents
