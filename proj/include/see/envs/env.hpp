#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace see::envs {

using Observation = std::vector<double>;

struct EnvSpec {
  std::string name;
  std::size_t action_count = 0;
  std::size_t obs_dim = 0;
  std::size_t max_episode_steps = 0;
};

/// One environment transition. `terminated` means the MDP reached a terminal
/// state (no bootstrapping); `truncated` means the time limit cut the episode
/// off (bootstrapping continues).
struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;

  bool done() const noexcept { return terminated || truncated; }
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const noexcept = 0;

  /// Starts a new episode; the initial state is a pure function of `seed`.
  virtual Observation reset(std::uint64_t seed) = 0;

  /// Throws UsageError when called before reset() or after the episode ended,
  /// and ConfigError for an out-of-range action.
  virtual StepResult step(std::size_t action) = 0;

  virtual Observation observation() const = 0;

  std::size_t elapsed_steps() const noexcept { return elapsed_; }

 protected:
  /// Shared bookkeeping for subclasses.
  void begin_episode() noexcept {
    elapsed_ = 0;
    active_ = true;
  }
  void check_step(std::size_t action) const;
  /// Advances the step counter, applies the time limit and closes the episode
  /// when done.
  void finish_step(StepResult& result);

 private:
  std::size_t elapsed_ = 0;
  bool active_ = false;
};

/// Names: "cartpole", "sparse_mountaincar", "planar_lander".
EnvSpec env_spec(std::string_view name);

std::unique_ptr<Environment> make_env(std::string_view name);

std::vector<std::string> env_names();

}  // namespace see::envs
