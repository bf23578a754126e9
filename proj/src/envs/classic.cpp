#include "see/envs/classic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "see/rng.hpp"

namespace see::envs {

CartPole::CartPole() : spec_(env_spec("cartpole")) {}

Observation CartPole::reset(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  state_.x = u(rng);
  state_.x_dot = u(rng);
  state_.theta = u(rng);
  state_.theta_dot = u(rng);
  begin_episode();
  return observation();
}

void CartPole::set_state(const State& state) {
  state_ = state;
  begin_episode();
}

Observation CartPole::observation() const {
  return {state_.x, state_.x_dot, state_.theta, state_.theta_dot};
}

StepResult CartPole::step(std::size_t action) {
  check_step(action);
  State& s = state_;
  const double force = action == 1 ? kForce : -kForce;
  const double cos_t = std::cos(s.theta);
  const double sin_t = std::sin(s.theta);
  const double temp = (force + kPoleMassLength * s.theta_dot * s.theta_dot * sin_t) / kTotalMass;
  const double theta_acc =
      (kGravity * sin_t - cos_t * temp) /
      (kHalfLength * (4.0 / 3.0 - kMassPole * cos_t * cos_t / kTotalMass));
  const double x_acc = temp - kPoleMassLength * theta_acc * cos_t / kTotalMass;

  s.x += kDt * s.x_dot;
  s.x_dot += kDt * x_acc;
  s.theta += kDt * s.theta_dot;
  s.theta_dot += kDt * theta_acc;

  StepResult result;
  result.observation = observation();
  result.reward = 1.0;
  result.terminated = s.x < -kPositionLimit || s.x > kPositionLimit || s.theta < -kAngleLimit ||
                      s.theta > kAngleLimit;
  finish_step(result);
  return result;
}

SparseMountainCar::SparseMountainCar() : spec_(env_spec("sparse_mountaincar")) {}

Observation SparseMountainCar::reset(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-0.6, -0.4);
  position_ = u(rng);
  velocity_ = 0.0;
  begin_episode();
  return observation();
}

void SparseMountainCar::set_state(double position, double velocity) {
  position_ = position;
  velocity_ = velocity;
  begin_episode();
}

Observation SparseMountainCar::observation() const { return {position_, velocity_}; }

StepResult SparseMountainCar::step(std::size_t action) {
  check_step(action);
  velocity_ += (static_cast<double>(action) - 1.0) * kForce - kGravity * std::cos(3.0 * position_);
  velocity_ = std::clamp(velocity_, -kMaxSpeed, kMaxSpeed);
  position_ += velocity_;
  position_ = std::clamp(position_, kMinPosition, kMaxPosition);
  if (position_ == kMinPosition && velocity_ < 0.0) velocity_ = 0.0;

  StepResult result;
  result.observation = observation();
  result.terminated = position_ >= kGoalPosition;
  result.reward = result.terminated ? 1.0 : 0.0;
  finish_step(result);
  return result;
}

}  // namespace see::envs
