#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "see/agents/exploit_agent.hpp"
#include "see/agents/explore_agent.hpp"
#include "see/envs/env.hpp"
#include "see/replay/replay.hpp"
#include "see/rng.hpp"
#include "see/trainer/config.hpp"

namespace see::trainer {

enum class RecordKind { train_episode, evaluation, loss };

std::string_view to_string(RecordKind k) noexcept;

/// One metric value. Metric names:
///   train_episode: "train_return", "train_length"
///   evaluation:    "eval_return"
///   loss:          "exploit_loss", "explore_loss" (means since the previous
///                  evaluation point)
struct MetricsRecord {
  std::uint64_t step = 0;
  RecordKind kind = RecordKind::loss;
  std::string metric;
  double value = 0.0;

  bool operator==(const MetricsRecord&) const = default;
};

struct EvalResult {
  double mean_return = 0.0;
  std::vector<double> returns;
  std::vector<std::size_t> lengths;
};

/// Seed of evaluation episode `episode` at evaluation point `eval_index`.
std::uint64_t evaluation_seed(std::uint64_t run_seed, std::uint64_t eval_index,
                              std::uint64_t episode);

/// Greedy rollouts of `params` on fresh environments. Returns undiscounted
/// episode returns.
EvalResult evaluate(const agents::QNetwork<float>& net, std::span<const float> params,
                    std::string_view env, std::uint64_t run_seed, std::uint64_t eval_index,
                    std::size_t episodes);

struct TrainStats {
  std::uint64_t env_steps = 0;
  std::uint64_t episodes = 0;
  std::uint64_t exploit_updates = 0;
  std::uint64_t explore_updates = 0;
  std::uint64_t target_updates = 0;
  std::uint64_t snapshot_pushes = 0;
  std::uint64_t evaluations = 0;
  /// Action-selection draws taken after the warm-up phase.
  std::uint64_t policy_random_draws = 0;
  /// Training episodes with a positive return.
  std::uint64_t rewarding_episodes = 0;
  /// Lengths of the update blocks, in order (interactions per cycle).
  std::vector<std::uint64_t> block_sizes;
};

/// Runs one training job. Not copyable; owns the agents, buffers and
/// environments.
class Trainer {
 public:
  using Sink = std::function<void(const MetricsRecord&)>;
  /// Called after every emitted record; returning true ends training early.
  using StopFn = std::function<bool(const MetricsRecord&)>;

  explicit Trainer(RunConfig config);
  ~Trainer();
  Trainer(const Trainer&) = delete;
  Trainer& operator=(const Trainer&) = delete;

  /// Runs until total_steps (or an early stop). Can be called once.
  /// Divergence is rethrown as DivergenceError carrying the environment step.
  void run(const Sink& sink, const StopFn& stop = {});

  const RunConfig& config() const noexcept { return config_; }
  const TrainStats& stats() const noexcept { return stats_; }
  const agents::ExploitAgent& exploit() const noexcept { return *exploit_; }
  const agents::ExploreAgent* explore() const noexcept { return explore_.get(); }
  const replay::TransitionBuffer& transitions() const noexcept { return *transitions_; }
  const replay::ParameterBuffer* parameters() const noexcept { return parameters_.get(); }

 private:
  struct State;

  bool interact(State& s, bool warm_up);
  void update_block(State& s, std::uint64_t steps);
  bool emit(State& s, MetricsRecord record);
  bool evaluate_now(State& s);

  RunConfig config_;
  envs::EnvSpec spec_;
  std::unique_ptr<agents::ExploitAgent> exploit_;
  std::unique_ptr<agents::ExploreAgent> explore_;
  std::unique_ptr<replay::TransitionBuffer> transitions_;
  std::unique_ptr<replay::ParameterBuffer> parameters_;
  std::unique_ptr<envs::Environment> env_;
  CountingRng action_rng_;
  TrainStats stats_;

  std::vector<float> live_embedding_;
  std::uint64_t episode_index_ = 0;
  bool ran_ = false;
};

/// Convenience wrapper collecting every record.
std::vector<MetricsRecord> train(const RunConfig& config);

}  // namespace see::trainer
