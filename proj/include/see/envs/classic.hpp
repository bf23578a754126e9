#pragma once

#include "see/envs/env.hpp"

namespace see::envs {

/// CartPole-v1 dynamics (Euler integration, +1 reward per step, 500-step
/// limit, 12 degree / 2.4 m termination).
class CartPole final : public Environment {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kMassCart = 1.0;
  static constexpr double kMassPole = 0.1;
  static constexpr double kTotalMass = kMassCart + kMassPole;
  static constexpr double kHalfLength = 0.5;
  static constexpr double kPoleMassLength = kMassPole * kHalfLength;
  static constexpr double kForce = 10.0;
  static constexpr double kDt = 0.02;
  static constexpr double kAngleLimit = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
  static constexpr double kPositionLimit = 2.4;

  struct State {
    double x = 0, x_dot = 0, theta = 0, theta_dot = 0;
  };

  CartPole();

  const EnvSpec& spec() const noexcept override { return spec_; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(std::size_t action) override;
  Observation observation() const override;

  const State& state() const noexcept { return state_; }
  /// Places the system in `state` and starts a fresh episode from it.
  void set_state(const State& state);

 private:
  EnvSpec spec_;
  State state_;
};

/// MountainCar-v0 dynamics with the sparse reward: 0 per step, +1 on
/// reaching the goal. 200-step limit.
class SparseMountainCar final : public Environment {
 public:
  static constexpr double kMinPosition = -1.2;
  static constexpr double kMaxPosition = 0.6;
  static constexpr double kMaxSpeed = 0.07;
  static constexpr double kGoalPosition = 0.5;
  static constexpr double kForce = 0.001;
  static constexpr double kGravity = 0.0025;

  SparseMountainCar();

  const EnvSpec& spec() const noexcept override { return spec_; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(std::size_t action) override;
  Observation observation() const override;

  double position() const noexcept { return position_; }
  double velocity() const noexcept { return velocity_; }
  void set_state(double position, double velocity);

 private:
  EnvSpec spec_;
  double position_ = 0.0;
  double velocity_ = 0.0;
};

}  // namespace see::envs
