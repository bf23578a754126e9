#include "see/agents/exploit_agent.hpp"

#include <algorithm>
#include <cmath>

#include "see/agents/targets.hpp"
#include "see/errors.hpp"

namespace see::agents {

ExploitAgent::ExploitAgent(const ExploitConfig& config, std::uint64_t seed)
    : config_(config),
      net_(config.obs_dim, config.action_count, config.hidden),
      online_(net_.init(seed)),
      target_(online_),
      adam_(online_.size(), fncore::AdamConfig{config.learning_rate}),
      grad_(online_.size()) {
  if (!(config.gamma >= 0.0 && config.gamma < 1.0))
    throw ConfigError("ExploitAgent: gamma must lie in [0, 1)");
  if (!(config.learning_rate > 0.0)) throw ConfigError("ExploitAgent: learning rate must be positive");
  if (!(config.tau >= 0.0 && config.tau <= 1.0)) throw ConfigError("ExploitAgent: tau must lie in [0, 1]");
  if (!(config.gradient_clip > 0.0)) throw ConfigError("ExploitAgent: gradient clip must be positive");
}

std::vector<float> ExploitAgent::q_values(std::span<const float> params,
                                          std::span<const float> state) const {
  std::vector<float> q;
  net_.forward(params, state, 1, scratch_trace_, q);
  return q;
}

std::size_t ExploitAgent::greedy_action(std::span<const float> params,
                                        std::span<const float> state) const {
  const auto q = q_values(params, state);
  return argmax<float>(q);
}

float ExploitAgent::double_dqn_target(const replay::Transition& t) const {
  const auto online_next = q_values(online_.span(), t.next_state);
  const auto target_next = q_values(target_.span(), t.next_state);
  return double_q_target<float>(t.reward, static_cast<float>(config_.gamma), t.terminated,
                                online_next, target_next);
}

std::vector<float> ExploitAgent::double_dqn_targets(const replay::TransitionBatch& batch) const {
  const std::size_t n = batch.size;
  const std::size_t actions = net_.action_count();
  std::vector<float> q_online, q_target;
  net_.forward(online_.span(), batch.next_states, n, scratch_trace_, q_online);
  net_.forward(target_.span(), batch.next_states, n, scratch_trace_, q_target);
  const float gamma = static_cast<float>(config_.gamma);
  std::vector<float> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const float> on(q_online.data() + i * actions, actions);
    const std::span<const float> tg(q_target.data() + i * actions, actions);
    y[i] = double_q_target<float>(batch.rewards[i], gamma, batch.terminated[i] != 0, on, tg);
  }
  return y;
}

float ExploitAgent::update(const replay::TransitionBatch& batch) {
  const std::size_t n = batch.size;
  if (n == 0) throw UsageError("ExploitAgent::update: empty batch");
  const std::size_t actions = net_.action_count();
  const std::vector<float> y = double_dqn_targets(batch);

  std::vector<float> q;
  net_.forward(online_.span(), batch.states, n, trace_, q);

  std::vector<float> dq(n * actions, 0.0f);
  double loss = 0.0;
  const float scale = 2.0f / static_cast<float>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = batch.actions[i];
    const float err = q[i * actions + a] - y[i];
    loss += static_cast<double>(err) * err;
    dq[i * actions + a] = scale * err;
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss))
    throw DivergenceError("exploitation loss is not finite", adam_.step_count + 1);

  std::fill(grad_.begin(), grad_.end(), 0.0f);
  net_.backward(online_.span(), trace_, dq, grad_, {});
  if (!fncore::all_finite<float>(grad_))
    throw DivergenceError("exploitation gradient is not finite", adam_.step_count + 1);
  fncore::clip_gradients<float>(grad_, static_cast<float>(config_.gradient_clip));
  fncore::adam_step<float>(adam_, online_.span(), grad_);
  return static_cast<float>(loss);
}

void ExploitAgent::update_target() {
  fncore::polyak_update<float>(target_.span(), online_.span(), config_.tau);
}

}  // namespace see::agents
