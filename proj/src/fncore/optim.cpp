#include "see/fncore/optim.hpp"

#include <cmath>
#include <string>

#include "see/errors.hpp"
#include "see/kernels/kernels.hpp"

namespace see::fncore {

template <class T>
bool all_finite(std::span<const T> values) noexcept {
  for (T v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

template <class T>
void adam_step(AdamState<T>& state, std::span<T> params, std::span<const T> grads) {
  if (params.size() != grads.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size())
    throw ConfigError("adam_step: parameter, gradient and moment lengths differ");
  const std::uint64_t step = state.step_count + 1;
  if (!all_finite(grads)) throw DivergenceError("adam_step: non-finite gradient", step);
  const auto& cfg = state.config;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  kernels::ops<T>().adam(params.data(), grads.data(), state.first_moment.data(),
                         state.second_moment.data(), params.size(), static_cast<T>(cfg.lr),
                         static_cast<T>(cfg.beta1), static_cast<T>(cfg.beta2),
                         static_cast<T>(bc1), static_cast<T>(bc2), static_cast<T>(cfg.eps));
  state.step_count = step;
}

template <class T>
void clip_gradients(std::span<T> grads, T clip_value) {
  if (!(clip_value > T(0))) throw ConfigError("clip_gradients: clip value must be positive");
  kernels::ops<T>().clip(grads.data(), grads.size(), clip_value);
}

template <class T>
void polyak_update(std::span<T> target, std::span<const T> online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw ConfigError("polyak_update: tau must lie in [0, 1], got " + std::to_string(tau));
  if (target.size() != online.size()) throw ConfigError("polyak_update: length mismatch");
  kernels::ops<T>().polyak(target.data(), online.data(), target.size(), static_cast<T>(tau));
}

template <class T>
std::vector<T> dueling_combine(T value, std::span<const T> advantages) {
  if (advantages.empty()) throw ConfigError("dueling_combine: empty advantage vector");
  T mean = T(0);
  for (T a : advantages) mean += a;
  mean /= static_cast<T>(advantages.size());
  std::vector<T> q(advantages.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = value + (advantages[i] - mean);
  return q;
}

#define SEE_INSTANTIATE_OPTIM(T)                                                   \
  template bool all_finite<T>(std::span<const T>) noexcept;                        \
  template void adam_step<T>(AdamState<T>&, std::span<T>, std::span<const T>);     \
  template void clip_gradients<T>(std::span<T>, T);                                \
  template void polyak_update<T>(std::span<T>, std::span<const T>, double);        \
  template std::vector<T> dueling_combine<T>(T, std::span<const T>);

SEE_INSTANTIATE_OPTIM(float)
SEE_INSTANTIATE_OPTIM(double)

}  // namespace see::fncore
