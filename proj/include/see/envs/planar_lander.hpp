#pragma once

#include "see/envs/env.hpp"

namespace see::envs {

/// Self-contained planar lander on flat ground.
///
/// Rigid body of unit mass with rotational inertia, integrated with
/// semi-implicit Euler at dt = 0.02 s. Gravity is 1.62 m/s^2 expressed in
/// viewport units (1 unit = 10 m). The two legs are points rigidly attached
/// below the hull; when a leg tip is below y = 0 it is in ground contact and
/// pushes back through a spring-damper with viscous friction. A hard landing
/// compresses the legs until a hull corner reaches the ground, which is a
/// crash.
///
/// Actions: 0 no-op, 1 left thruster (pushes the hull towards body -x and
/// spins it counter-clockwise), 2 main engine (along the body up axis),
/// 3 right thruster (mirror of 1).
///
/// Observation: (x, y, vx, vy, angle, angular velocity, left contact, right
/// contact). The landing pad is centred at x = 0.
///
/// Reward per step: potential(s') - potential(s) - fuel, with
///   potential = -100 |(x, y)| - 100 |(vx, vy)| - 100 |angle| + 10 per leg in contact.
/// A crash (hull touching the ground or |x| >= 1) ends the episode with
/// reward -100; resting on both legs with speed below 0.05 ends it with +100.
/// Both termination tests read only the current observation.
class PlanarLander final : public Environment {
 public:
  static constexpr double kDt = 0.02;
  static constexpr double kGravity = 1.62 * 0.1;
  static constexpr double kMainAccel = 0.3;
  static constexpr double kSideAccel = 0.03;
  static constexpr double kSideSpinKick = 0.05;
  static constexpr double kMainFuel = 0.3;
  static constexpr double kSideFuel = 0.03;
  static constexpr double kInertia = 0.02;
  static constexpr double kLegX = 0.08;
  static constexpr double kLegY = -0.10;
  static constexpr double kHullHalfWidth = 0.06;
  static constexpr double kHullBottom = -0.03;
  static constexpr double kHullTop = 0.05;
  static constexpr double kLegStiffness = 10.0;
  static constexpr double kLegDamping = 4.0;
  static constexpr double kLegFriction = 4.0;
  static constexpr double kRestSpeed = 0.05;
  static constexpr double kBoundX = 1.0;
  static constexpr double kStartHeight = 1.4;
  static constexpr double kSuccessReward = 100.0;
  static constexpr double kCrashReward = -100.0;

  struct State {
    double x = 0, y = kStartHeight, vx = 0, vy = 0, angle = 0, angular_velocity = 0;
  };

  PlanarLander();

  const EnvSpec& spec() const noexcept override { return spec_; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(std::size_t action) override;
  Observation observation() const override;

  const State& state() const noexcept { return state_; }
  void set_state(const State& state);

  /// Shaping potential of an observation.
  static double potential(const Observation& obs);
  /// Both legs down and nearly still.
  static bool is_landed(const Observation& obs);
  static bool leg_in_contact(const State& s, bool left);
  static bool hull_in_contact(const State& s);

 private:
  EnvSpec spec_;
  State state_;
};

}  // namespace see::envs
