#include "see/trainer/trainer.hpp"

#include <algorithm>
#include <random>

#include "see/agents/targets.hpp"
#include "see/errors.hpp"
#include "see/trainer/policy.hpp"

namespace see::trainer {

std::string_view to_string(RecordKind k) noexcept {
  switch (k) {
    case RecordKind::train_episode: return "train_episode";
    case RecordKind::evaluation: return "evaluation";
    case RecordKind::loss: return "loss";
  }
  return "?";
}

std::uint64_t evaluation_seed(std::uint64_t run_seed, std::uint64_t eval_index,
                              std::uint64_t episode) {
  return derive_seed(derive_seed(run_seed, SeedStream::evaluation_env), eval_index, episode);
}

namespace {

std::vector<float> to_float(const envs::Observation& obs) {
  return std::vector<float>(obs.begin(), obs.end());
}

}  // namespace

EvalResult evaluate(const agents::QNetwork<float>& net, std::span<const float> params,
                    std::string_view env_name, std::uint64_t run_seed, std::uint64_t eval_index,
                    std::size_t episodes) {
  if (episodes == 0) throw ConfigError("evaluate: episodes must be >= 1");
  auto env = envs::make_env(env_name);
  if (env->spec().obs_dim != net.obs_dim() || env->spec().action_count != net.action_count())
    throw ConfigError("evaluate: network does not match environment '" + std::string(env_name) + "'");
  EvalResult result;
  fncore::ForwardTrace<float> trace;
  std::vector<float> q;
  for (std::size_t e = 0; e < episodes; ++e) {
    auto obs = to_float(env->reset(evaluation_seed(run_seed, eval_index, e)));
    double ret = 0.0;
    std::size_t len = 0;
    for (;;) {
      net.forward(params, obs, 1, trace, q);
      const auto r = env->step(agents::argmax<float>(q));
      ret += r.reward;
      ++len;
      if (r.done()) break;
      std::copy(r.observation.begin(), r.observation.end(), obs.begin());
    }
    result.returns.push_back(ret);
    result.lengths.push_back(len);
  }
  double sum = 0.0;
  for (double r : result.returns) sum += r;
  result.mean_return = sum / static_cast<double>(episodes);
  return result;
}

struct Trainer::State {
  const Sink* sink = nullptr;
  const StopFn* stop = nullptr;
  std::vector<float> obs;
  double episode_return = 0.0;
  std::uint64_t episode_length = 0;
  double exploit_loss_sum = 0.0;
  std::uint64_t exploit_loss_count = 0;
  double explore_loss_sum = 0.0;
  std::uint64_t explore_loss_count = 0;
  std::uint64_t warm_up_draws = 0;
  replay::TransitionBatch exploit_batch;
  replay::TransitionBatch explore_batch;
};

Trainer::Trainer(RunConfig config)
    : config_(std::move(config)), action_rng_(derive_seed(config_.seed, SeedStream::action_selection)) {
  config_.validate();
  spec_ = envs::env_spec(config_.env);
  const std::uint64_t seed = config_.seed;

  agents::ExploitConfig ec;
  ec.obs_dim = spec_.obs_dim;
  ec.action_count = spec_.action_count;
  ec.hidden = config_.hidden;
  ec.gamma = config_.gamma;
  ec.learning_rate = config_.learning_rate;
  ec.tau = config_.tau;
  ec.gradient_clip = config_.gradient_clip;
  exploit_ = std::make_unique<agents::ExploitAgent>(ec, derive_seed(seed, SeedStream::exploit_init));

  if (config_.algorithm == Algorithm::see) {
    agents::ExploreConfig xc;
    xc.obs_dim = spec_.obs_dim;
    xc.action_count = spec_.action_count;
    xc.probe_count = config_.probe_count;
    xc.exploit_hidden = config_.hidden;
    xc.hidden = config_.hidden;
    xc.exploit_gamma = config_.gamma;
    xc.gamma = config_.explore_gamma;
    xc.learning_rate = config_.explore_learning_rate;
    xc.tau = config_.explore_tau;
    xc.gradient_clip = config_.gradient_clip;
    xc.max_update = config_.ablation != Ablation::no_max_update;
    xc.probe_init_scale = config_.probe_init_scale;
    explore_ = std::make_unique<agents::ExploreAgent>(xc, derive_seed(seed, SeedStream::explore_init));
    if (config_.ablation != Ablation::no_conditioning)
      parameters_ = std::make_unique<replay::ParameterBuffer>(
          config_.value_function_capacity, derive_seed(seed, SeedStream::parameter_sampling));
  }
  transitions_ = std::make_unique<replay::TransitionBuffer>(
      config_.replay_capacity, spec_.obs_dim, derive_seed(seed, SeedStream::transition_sampling));
  env_ = envs::make_env(config_.env);
}

Trainer::~Trainer() = default;

bool Trainer::emit(State& s, MetricsRecord record) {
  (*s.sink)(record);
  return *s.stop && (*s.stop)(record);
}

bool Trainer::evaluate_now(State& s) {
  const std::uint64_t step = stats_.env_steps;
  bool stop = false;
  if (s.exploit_loss_count > 0) {
    stop |= emit(s, {step, RecordKind::loss, "exploit_loss",
                     s.exploit_loss_sum / static_cast<double>(s.exploit_loss_count)});
    s.exploit_loss_sum = 0.0;
    s.exploit_loss_count = 0;
  }
  if (s.explore_loss_count > 0) {
    stop |= emit(s, {step, RecordKind::loss, "explore_loss",
                     s.explore_loss_sum / static_cast<double>(s.explore_loss_count)});
    s.explore_loss_sum = 0.0;
    s.explore_loss_count = 0;
  }
  const auto result = evaluate(exploit_->network(), exploit_->online().span(), config_.env,
                               config_.seed, stats_.evaluations, config_.eval_episodes);
  ++stats_.evaluations;
  stop |= emit(s, {step, RecordKind::evaluation, "eval_return", result.mean_return});
  return stop;
}

bool Trainer::interact(State& s, bool warm_up) {
  std::size_t action = 0;
  if (warm_up) {
    std::uniform_int_distribution<std::size_t> pick(0, spec_.action_count - 1);
    action = pick(action_rng_);
  } else {
    const auto q = exploit_->q_values(exploit_->online().span(), s.obs);
    if (config_.algorithm == Algorithm::eps_greedy) {
      action = eps_greedy_action(q, epsilon_at(config_, stats_.env_steps), action_rng_);
    } else {
      const auto delta = explore_->delta_values(live_embedding_, s.obs);
      if (config_.ablation == Ablation::no_mixing)
        action = episode_index_ % 2 == 0 ? agents::argmax<float>(q) : agents::argmax<float>(delta);
      else
        action = behavior_action(q, delta, config_.mixture);
    }
    stats_.policy_random_draws = action_rng_.draws() - s.warm_up_draws;
  }

  const auto r = env_->step(action);
  replay::Transition t;
  t.state = s.obs;
  t.action = action;
  t.reward = static_cast<float>(r.reward);
  t.next_state = to_float(r.observation);
  t.terminated = r.terminated;
  t.truncated = r.truncated;
  transitions_->push(t);

  ++stats_.env_steps;
  s.episode_return += r.reward;
  ++s.episode_length;
  s.obs = std::move(t.next_state);

  bool stop = false;
  if (r.done()) {
    const std::uint64_t step = stats_.env_steps;
    ++stats_.episodes;
    if (s.episode_return > 0.0) ++stats_.rewarding_episodes;
    stop |= emit(s, {step, RecordKind::train_episode, "train_return", s.episode_return});
    stop |= emit(s, {step, RecordKind::train_episode, "train_length",
                     static_cast<double>(s.episode_length)});
    ++episode_index_;
    s.episode_return = 0.0;
    s.episode_length = 0;
    s.obs = to_float(env_->reset(derive_seed(config_.seed, SeedStream::train_env, episode_index_)));
  }
  if (stats_.env_steps % config_.eval_interval == 0) stop |= evaluate_now(s);
  return stop;
}

void Trainer::update_block(State& s, std::uint64_t steps) {
  stats_.block_sizes.push_back(steps);
  for (std::uint64_t i = 0; i < steps; ++i) {
    transitions_->sample_into(config_.batch_size, s.exploit_batch);
    s.exploit_loss_sum += exploit_->update(s.exploit_batch);
    ++s.exploit_loss_count;
    ++stats_.exploit_updates;
  }
  if (explore_) {
    std::vector<replay::ParameterSnapshot> snapshots;
    if (parameters_) {
      parameters_->push(exploit_->online());
      ++stats_.snapshot_pushes;
    } else {
      // Unconditioned variant: the live parameters, not owned.
      snapshots.emplace_back(replay::ParameterSnapshot{}, &exploit_->online());
    }
    for (std::uint64_t i = 0; i < steps; ++i) {
      transitions_->sample_into(config_.explore_transition_batch, s.explore_batch);
      if (parameters_) snapshots = parameters_->sample(config_.value_function_batch);
      s.explore_loss_sum += explore_->update(s.explore_batch, snapshots);
      ++s.explore_loss_count;
      ++stats_.explore_updates;
    }
    explore_->update_target();
  }
  exploit_->update_target();
  ++stats_.target_updates;
}

void Trainer::run(const Sink& sink, const StopFn& stop) {
  if (ran_) throw UsageError("Trainer::run may only be called once");
  ran_ = true;
  State s;
  s.sink = &sink;
  s.stop = &stop;
  s.obs = to_float(env_->reset(derive_seed(config_.seed, SeedStream::train_env, episode_index_)));

  const std::uint64_t total = config_.total_steps;
  try {
    const std::uint64_t warm = std::min(config_.warm_up_steps, total);
    while (stats_.env_steps < warm)
      if (interact(s, true)) return;
    s.warm_up_draws = action_rng_.draws();

    while (stats_.env_steps < total) {
      if (explore_) live_embedding_ = explore_->embed(exploit_->online().span());
      const std::uint64_t block = std::min(config_.update_frequency, total - stats_.env_steps);
      for (std::uint64_t i = 0; i < block; ++i)
        if (interact(s, false)) return;
      update_block(s, block);
    }
  } catch (const DivergenceError& e) {
    throw DivergenceError(stats_.env_steps,
                          "training diverged at environment step " +
                              std::to_string(stats_.env_steps) + ": " + e.reason() +
                              " (optimizer step " + std::to_string(e.step()) + ")",
                          e.reason());
  }
}

std::vector<MetricsRecord> train(const RunConfig& config) {
  Trainer trainer(config);
  std::vector<MetricsRecord> records;
  trainer.run([&](const MetricsRecord& r) { records.push_back(r); });
  return records;
}

}  // namespace see::trainer
