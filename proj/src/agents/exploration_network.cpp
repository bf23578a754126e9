#include "see/agents/exploration_network.hpp"

#include <random>

#include "see/errors.hpp"
#include "see/rng.hpp"

namespace see::agents {

template <class T>
ExplorationNetwork<T>::ExplorationNetwork(const QNetwork<T>& exploit_net, std::size_t probe_count,
                                          std::vector<std::size_t> hidden)
    : exploit_(exploit_net),
      probe_count_(probe_count),
      spec_{exploit_net.obs_dim() + probe_count * exploit_net.action_count(), std::move(hidden),
            exploit_net.action_count(), fncore::Activation::relu} {
  if (probe_count == 0) throw ConfigError("ExplorationNetwork: probe_count must be >= 1");
  spec_.validate();
}

template <class T>
fncore::ParameterVector<T> ExplorationNetwork<T>::init(std::uint64_t seed,
                                                       double probe_scale) const {
  fncore::ParameterVector<T> params(parameter_count());
  const auto mlp = fncore::init_parameters<T>(spec_, seed);
  std::copy(mlp.values().begin(), mlp.values().end(), params.values().begin());
  Rng rng(derive_seed(seed, 1));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = probe_offset(); i < params.size(); ++i)
    params[i] = static_cast<T>(normal(rng) * probe_scale);
  return params;
}

template <class T>
void ExplorationNetwork<T>::embed(std::span<const T> params, std::span<const T> snapshot,
                                  std::vector<T>& out, fncore::ForwardTrace<T>& trace) const {
  if (params.size() != parameter_count())
    throw ConfigError("ExplorationNetwork: parameter vector has the wrong length");
  exploit_.forward(snapshot, probes(params), probe_count_, trace, out);
}

template <class T>
std::vector<T> ExplorationNetwork<T>::embed(std::span<const T> params,
                                            std::span<const T> snapshot) const {
  fncore::ForwardTrace<T> trace;
  std::vector<T> out;
  embed(params, snapshot, out, trace);
  return out;
}

template <class T>
void ExplorationNetwork<T>::delta_values(std::span<const T> params, std::span<const T> embedding,
                                         std::span<const T> states, std::size_t batch,
                                         std::vector<T>& out,
                                         fncore::ForwardTrace<T>& trace) const {
  const std::size_t obs = obs_dim();
  const std::size_t emb = embedding_dim();
  if (embedding.size() != emb) throw ConfigError("ExplorationNetwork: embedding has the wrong length");
  if (states.size() != batch * obs) throw ConfigError("ExplorationNetwork: state batch has the wrong length");
  std::vector<T> inputs(batch * spec_.input_dim);
  for (std::size_t i = 0; i < batch; ++i) {
    T* row = inputs.data() + i * spec_.input_dim;
    std::copy(states.begin() + i * obs, states.begin() + (i + 1) * obs, row);
    std::copy(embedding.begin(), embedding.end(), row + obs);
  }
  fncore::mlp_forward<T>(spec_, mlp_params(params), inputs, batch, trace);
  const auto o = trace.output();
  out.assign(o.begin(), o.end());
}

template <class T>
std::vector<T> ExplorationNetwork<T>::delta_values(std::span<const T> params,
                                                   std::span<const T> state,
                                                   std::span<const T> snapshot) const {
  const auto e = embed(params, snapshot);
  fncore::ForwardTrace<T> trace;
  std::vector<T> out;
  delta_values(params, e, state, 1, out, trace);
  return out;
}

template <class T>
T ExplorationNetwork<T>::weighted_loss(std::span<const T> params, const PairBatch<T>& pairs,
                                       std::span<T> grad) const {
  const std::size_t rows = pairs.rows();
  const std::size_t obs = obs_dim();
  const std::size_t emb = embedding_dim();
  const std::size_t actions = action_count();
  const std::size_t width = spec_.input_dim;
  if (rows == 0) throw UsageError("ExplorationNetwork::weighted_loss: no rows");
  if (grad.size() != parameter_count())
    throw ConfigError("ExplorationNetwork::weighted_loss: gradient has the wrong length");
  if (pairs.states.size() != rows * obs || pairs.targets.size() != rows ||
      pairs.weights.size() != rows || pairs.snapshot_index.size() != rows)
    throw ConfigError("ExplorationNetwork::weighted_loss: inconsistent pair batch");

  const std::size_t snaps = pairs.snapshots.size();
  std::vector<fncore::ForwardTrace<T>> probe_traces(snaps);
  std::vector<std::vector<T>> embeddings(snaps);
  for (std::size_t k = 0; k < snaps; ++k)
    embed(params, pairs.snapshots[k], embeddings[k], probe_traces[k]);

  std::vector<T> inputs(rows * width);
  for (std::size_t r = 0; r < rows; ++r) {
    T* row = inputs.data() + r * width;
    std::copy(pairs.states.begin() + r * obs, pairs.states.begin() + (r + 1) * obs, row);
    const auto& e = embeddings.at(pairs.snapshot_index[r]);
    std::copy(e.begin(), e.end(), row + obs);
  }
  fncore::ForwardTrace<T> trace;
  fncore::mlp_forward<T>(spec_, mlp_params(params), inputs, rows, trace);
  const auto out = trace.output();

  T loss = T(0);
  std::vector<T> dout(rows * actions, T(0));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t a = pairs.actions[r];
    const T err = out[r * actions + a] - pairs.targets[r];
    loss += pairs.weights[r] * err * err;
    dout[r * actions + a] = T(2) * pairs.weights[r] * err;
  }

  std::vector<T> dinputs(rows * width);
  fncore::mlp_backward<T>(spec_, mlp_params(params), trace, dout, grad.subspan(0, probe_offset()),
                          dinputs);

  // Fingerprint gradient per snapshot, then through the exploitation network
  // into the probe states.
  std::vector<std::vector<T>> dembed(snaps, std::vector<T>(emb, T(0)));
  for (std::size_t r = 0; r < rows; ++r) {
    auto& d = dembed[pairs.snapshot_index[r]];
    const T* src = dinputs.data() + r * width + obs;
    for (std::size_t i = 0; i < emb; ++i) d[i] += src[i];
  }
  std::vector<T> dprobes(probe_count_ * obs);
  T* probe_grad = grad.data() + probe_offset();
  for (std::size_t k = 0; k < snaps; ++k) {
    exploit_.backward(pairs.snapshots[k], probe_traces[k], dembed[k], {}, dprobes);
    for (std::size_t i = 0; i < dprobes.size(); ++i) probe_grad[i] += dprobes[i];
  }
  return loss;
}

template class ExplorationNetwork<float>;
template class ExplorationNetwork<double>;

}  // namespace see::agents
