#include "see/envs/env.hpp"

#include <string>

#include "see/envs/classic.hpp"
#include "see/envs/planar_lander.hpp"
#include "see/errors.hpp"

namespace see::envs {

void Environment::check_step(std::size_t action) const {
  if (!active_) throw UsageError(spec().name + ": step() called on a finished or unstarted episode");
  if (action >= spec().action_count)
    throw ConfigError(spec().name + ": action " + std::to_string(action) + " out of range");
}

void Environment::finish_step(StepResult& result) {
  ++elapsed_;
  if (!result.terminated && elapsed_ >= spec().max_episode_steps) result.truncated = true;
  if (result.done()) active_ = false;
}

EnvSpec env_spec(std::string_view name) {
  if (name == "cartpole") return {"cartpole", 2, 4, 500};
  if (name == "sparse_mountaincar") return {"sparse_mountaincar", 3, 2, 200};
  if (name == "planar_lander") return {"planar_lander", 4, 8, 1000};
  throw ConfigError("unknown environment '" + std::string(name) + "'");
}

std::unique_ptr<Environment> make_env(std::string_view name) {
  if (name == "cartpole") return std::make_unique<CartPole>();
  if (name == "sparse_mountaincar") return std::make_unique<SparseMountainCar>();
  if (name == "planar_lander") return std::make_unique<PlanarLander>();
  throw ConfigError("unknown environment '" + std::string(name) + "'");
}

std::vector<std::string> env_names() { return {"cartpole", "sparse_mountaincar", "planar_lander"}; }

}  // namespace see::envs
