#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace see::fncore {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <class T>
struct AdamState {
  AdamState() = default;
  AdamState(std::size_t count, AdamConfig cfg)
      : first_moment(count, T(0)), second_moment(count, T(0)), config(cfg) {}

  std::vector<T> first_moment;
  std::vector<T> second_moment;
  std::uint64_t step_count = 0;
  AdamConfig config;
};

/// Bias-corrected Adam step. Throws DivergenceError (carrying the step index
/// that would have been taken) when a gradient is non-finite; params and
/// state are left untouched in that case.
template <class T>
void adam_step(AdamState<T>& state, std::span<T> params, std::span<const T> grads);

/// Elementwise clamp of every component to [-clip_value, clip_value].
template <class T>
void clip_gradients(std::span<T> grads, T clip_value);

/// target = (1 - tau) * target + tau * online. tau outside [0, 1] is a
/// ConfigError.
template <class T>
void polyak_update(std::span<T> target, std::span<const T> online, double tau);

/// q[a] = value + advantages[a] - mean(advantages).
template <class T>
std::vector<T> dueling_combine(T value, std::span<const T> advantages);

template <class T>
bool all_finite(std::span<const T> values) noexcept;

}  // namespace see::fncore
