#pragma once

// Scalar target formulas shared by the agents, the tabular tests and the
// behaviour policy. They take already-evaluated network outputs so they can
// be checked against hand-computed values.

#include <cstddef>
#include <span>

namespace see::agents {

/// Index of the largest value; ties go to the lowest index.
template <class T>
std::size_t argmax(std::span<const T> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

/// Double-DQN regression target: the online values pick the next action,
/// the target values score it. Terminal transitions do not bootstrap.
template <class T>
T double_q_target(T reward, T gamma, bool terminated, std::span<const T> next_online,
                  std::span<const T> next_target) {
  if (terminated) return reward;
  return reward + gamma * next_target[argmax(next_online)];
}

/// Absolute one-step TD error of a Q estimate (no target network).
template <class T>
T absolute_td_error(T reward, T gamma, bool terminated, T q_taken, std::span<const T> q_next) {
  T target = reward;
  if (!terminated) {
    T best = q_next[0];
    for (T q : q_next) best = q > best ? q : best;
    target += gamma * best;
  }
  const T err = target - q_taken;
  return err < T(0) ? -err : err;
}

/// One backup of the maximum-reward recursion: max(r, gamma * next).
template <class T>
T max_reward_backup(T reward, T gamma, T next_value) {
  const T boot = gamma * next_value;
  return boot > reward ? boot : reward;
}

/// Exploration-value target with double-Q action selection. With
/// `max_update` the bootstrap is combined by max(r, gamma * next), otherwise
/// by the ordinary sum r + gamma * next.
template <class T>
T exploration_target(T reward, T gamma, bool terminated, std::span<const T> next_online,
                     std::span<const T> next_target, bool max_update) {
  if (terminated) return reward;
  const T next = next_target[argmax(next_online)];
  return max_update ? max_reward_backup(reward, gamma, next) : reward + gamma * next;
}

}  // namespace see::agents
