#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "see/agents/q_network.hpp"
#include "see/fncore/mlp.hpp"

namespace see::agents {

/// Weighted (state, action, snapshot, target) rows for one exploration loss
/// evaluation. Snapshots are exploitation parameter vectors; every row names
/// one of them by index.
template <class T>
struct PairBatch {
  std::vector<std::span<const T>> snapshots;
  std::vector<T> states;  // [rows x obs_dim]
  std::vector<std::uint32_t> actions;
  std::vector<std::uint32_t> snapshot_index;
  std::vector<T> targets;
  std::vector<T> weights;

  std::size_t rows() const noexcept { return actions.size(); }
};

/// Predicts the exploitation network's absolute TD error per action from an
/// environment state and a fingerprint of the exploitation parameters.
///
/// The fingerprint evaluates the exploitation network at `probe_count`
/// learnable probe states and concatenates the q-value vectors in probe
/// order. Parameter layout: the MLP parameters (MlpSpec layout, input =
/// state followed by fingerprint) followed by the probe states,
/// [probe_count x obs_dim] row-major, starting at probe_offset().
template <class T>
class ExplorationNetwork {
 public:
  ExplorationNetwork(const QNetwork<T>& exploit_net, std::size_t probe_count,
                     std::vector<std::size_t> hidden);

  const QNetwork<T>& exploit_net() const noexcept { return exploit_; }
  const fncore::MlpSpec& mlp_spec() const noexcept { return spec_; }
  std::size_t obs_dim() const noexcept { return exploit_.obs_dim(); }
  std::size_t action_count() const noexcept { return exploit_.action_count(); }
  std::size_t probe_count() const noexcept { return probe_count_; }
  std::size_t embedding_dim() const noexcept { return probe_count_ * exploit_.action_count(); }
  std::size_t probe_offset() const { return spec_.parameter_count(); }
  std::size_t parameter_count() const { return probe_offset() + probe_count_ * obs_dim(); }

  /// MLP initialised like any other layer stack; probe entries drawn from
  /// N(0, 1) * probe_scale.
  fncore::ParameterVector<T> init(std::uint64_t seed, double probe_scale = 0.1) const;

  std::span<const T> mlp_params(std::span<const T> params) const {
    return params.subspan(0, probe_offset());
  }
  std::span<const T> probes(std::span<const T> params) const {
    return params.subspan(probe_offset(), probe_count_ * obs_dim());
  }

  /// Fingerprint of `snapshot` under the probe states in `params`.
  std::vector<T> embed(std::span<const T> params, std::span<const T> snapshot) const;
  void embed(std::span<const T> params, std::span<const T> snapshot, std::vector<T>& out,
             fncore::ForwardTrace<T>& trace) const;

  /// Outputs [batch x action_count] for states that share one fingerprint.
  void delta_values(std::span<const T> params, std::span<const T> embedding,
                    std::span<const T> states, std::size_t batch, std::vector<T>& out,
                    fncore::ForwardTrace<T>& trace) const;
  std::vector<T> delta_values(std::span<const T> params, std::span<const T> state,
                              std::span<const T> snapshot) const;

  /// sum_rows weight * (output[action] - target)^2. The gradient with respect
  /// to all parameters, probe states included, is ADDED into `grad`.
  /// Targets are constants; snapshots receive no gradient.
  T weighted_loss(std::span<const T> params, const PairBatch<T>& pairs, std::span<T> grad) const;

 private:
  QNetwork<T> exploit_;
  std::size_t probe_count_;
  fncore::MlpSpec spec_;
};

}  // namespace see::agents
