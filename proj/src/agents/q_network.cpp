#include "see/agents/q_network.hpp"

#include "see/errors.hpp"

namespace see::agents {

template <class T>
QNetwork<T>::QNetwork(std::size_t obs_dim, std::size_t action_count,
                      std::vector<std::size_t> hidden)
    : action_count_(action_count),
      spec_{obs_dim, std::move(hidden), action_count + 1, fncore::Activation::relu} {
  if (action_count == 0) throw ConfigError("QNetwork: action_count must be >= 1");
  spec_.validate();
}

template <class T>
fncore::ParameterVector<T> QNetwork<T>::init(std::uint64_t seed) const {
  return fncore::init_parameters<T>(spec_, seed);
}

template <class T>
void QNetwork<T>::forward(std::span<const T> params, std::span<const T> states, std::size_t batch,
                          fncore::ForwardTrace<T>& trace, std::vector<T>& q) const {
  fncore::mlp_forward<T>(spec_, params, states, batch, trace);
  const auto head = trace.output();
  const std::size_t width = action_count_ + 1;
  const T actions = static_cast<T>(action_count_);
  q.resize(batch * action_count_);
  for (std::size_t i = 0; i < batch; ++i) {
    const T* row = head.data() + i * width;
    T mean = T(0);
    for (std::size_t a = 0; a < action_count_; ++a) mean += row[1 + a];
    mean /= actions;  // same arithmetic as fncore::dueling_combine
    for (std::size_t a = 0; a < action_count_; ++a)
      q[i * action_count_ + a] = row[0] + (row[1 + a] - mean);
  }
}

template <class T>
std::vector<T> QNetwork<T>::q_values(std::span<const T> params, std::span<const T> state) const {
  fncore::ForwardTrace<T> trace;
  std::vector<T> q;
  forward(params, state, 1, trace, q);
  return q;
}

template <class T>
void QNetwork<T>::backward(std::span<const T> params, const fncore::ForwardTrace<T>& trace,
                           std::span<const T> dq, std::span<T> param_grad,
                           std::span<T> input_grad) const {
  const std::size_t batch = trace.batch();
  if (dq.size() != batch * action_count_)
    throw InternalError("QNetwork::backward: dq has the wrong length");
  const std::size_t width = action_count_ + 1;
  const T inv_actions = T(1) / static_cast<T>(action_count_);
  std::vector<T> dhead(batch * width);
  for (std::size_t i = 0; i < batch; ++i) {
    const T* g = dq.data() + i * action_count_;
    T sum = T(0);
    for (std::size_t a = 0; a < action_count_; ++a) sum += g[a];
    const T mean = sum * inv_actions;
    dhead[i * width] = sum;
    for (std::size_t a = 0; a < action_count_; ++a) dhead[i * width + 1 + a] = g[a] - mean;
  }
  fncore::mlp_backward<T>(spec_, params, trace, dhead, param_grad, input_grad);
}

template class QNetwork<float>;
template class QNetwork<double>;

}  // namespace see::agents
