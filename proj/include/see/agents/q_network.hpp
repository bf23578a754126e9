#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "see/fncore/mlp.hpp"

namespace see::agents {

/// Dueling action-value network. A shared ReLU torso feeds one linear layer
/// whose first output is the state value and whose remaining `action_count`
/// outputs are advantages; q[a] = value + adv[a] - mean(adv). The head is
/// stored as the last layer of a single MlpSpec (row 0 = value head).
template <class T>
class QNetwork {
 public:
  QNetwork(std::size_t obs_dim, std::size_t action_count, std::vector<std::size_t> hidden);

  const fncore::MlpSpec& spec() const noexcept { return spec_; }
  std::size_t obs_dim() const noexcept { return spec_.input_dim; }
  std::size_t action_count() const noexcept { return action_count_; }
  std::size_t parameter_count() const { return spec_.parameter_count(); }

  fncore::ParameterVector<T> init(std::uint64_t seed) const;

  /// q is resized to [batch x action_count].
  void forward(std::span<const T> params, std::span<const T> states, std::size_t batch,
               fncore::ForwardTrace<T>& trace, std::vector<T>& q) const;

  std::vector<T> q_values(std::span<const T> params, std::span<const T> state) const;

  /// Backprop dq [batch x action_count]. Same accumulate/overwrite rules as
  /// fncore::mlp_backward.
  void backward(std::span<const T> params, const fncore::ForwardTrace<T>& trace,
                std::span<const T> dq, std::span<T> param_grad, std::span<T> input_grad) const;

 private:
  std::size_t action_count_;
  fncore::MlpSpec spec_;
};

}  // namespace see::agents
