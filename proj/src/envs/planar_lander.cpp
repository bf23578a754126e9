#include "see/envs/planar_lander.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "see/rng.hpp"

namespace see::envs {

namespace {

struct Vec2 {
  double x, y;
};

// Body-frame offset rotated into the world frame.
Vec2 rotate(double angle, double bx, double by) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {bx * c - by * s, bx * s + by * c};
}

}  // namespace

PlanarLander::PlanarLander() : spec_(env_spec("planar_lander")) {}

Observation PlanarLander::reset(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> ux(-0.3, 0.3);
  std::uniform_real_distribution<double> uvx(-0.2, 0.2);
  std::uniform_real_distribution<double> uvy(-0.2, 0.0);
  state_ = State{};
  state_.x = ux(rng);
  state_.vx = uvx(rng);
  state_.vy = uvy(rng);
  begin_episode();
  return observation();
}

void PlanarLander::set_state(const State& state) {
  state_ = state;
  begin_episode();
}

bool PlanarLander::leg_in_contact(const State& s, bool left) {
  const Vec2 r = rotate(s.angle, left ? -kLegX : kLegX, kLegY);
  return s.y + r.y <= 0.0;
}

bool PlanarLander::hull_in_contact(const State& s) {
  const double corners[4][2] = {{-kHullHalfWidth, kHullBottom},
                                {kHullHalfWidth, kHullBottom},
                                {-kHullHalfWidth, kHullTop},
                                {kHullHalfWidth, kHullTop}};
  for (const auto& c : corners) {
    if (s.y + rotate(s.angle, c[0], c[1]).y <= 0.0) return true;
  }
  return false;
}

Observation PlanarLander::observation() const {
  const State& s = state_;
  return {s.x,
          s.y,
          s.vx,
          s.vy,
          s.angle,
          s.angular_velocity,
          leg_in_contact(s, true) ? 1.0 : 0.0,
          leg_in_contact(s, false) ? 1.0 : 0.0};
}

double PlanarLander::potential(const Observation& o) {
  return -100.0 * std::sqrt(o[0] * o[0] + o[1] * o[1]) - 100.0 * std::sqrt(o[2] * o[2] + o[3] * o[3]) -
         100.0 * std::abs(o[4]) + 10.0 * o[6] + 10.0 * o[7];
}

bool PlanarLander::is_landed(const Observation& o) {
  return o[6] > 0.5 && o[7] > 0.5 && std::sqrt(o[2] * o[2] + o[3] * o[3]) < kRestSpeed;
}

StepResult PlanarLander::step(std::size_t action) {
  check_step(action);
  const Observation before = observation();
  State& s = state_;

  double ax = 0.0;
  double ay = -kGravity;
  double torque = 0.0;
  double spin_kick = 0.0;
  double fuel = 0.0;

  const Vec2 up = rotate(s.angle, 0.0, 1.0);
  const Vec2 right = rotate(s.angle, 1.0, 0.0);
  if (action == 2) {
    ax += kMainAccel * up.x;
    ay += kMainAccel * up.y;
    fuel = kMainFuel;
  } else if (action == 1 || action == 3) {
    const double dir = action == 1 ? -1.0 : 1.0;
    ax += dir * kSideAccel * right.x;
    ay += dir * kSideAccel * right.y;
    spin_kick = -dir * kSideSpinKick;
    fuel = kSideFuel;
  }

  for (const double side : {-1.0, 1.0}) {
    const Vec2 r = rotate(s.angle, side * kLegX, kLegY);
    const double tip_y = s.y + r.y;
    if (tip_y > 0.0) continue;
    const double tip_vx = s.vx - s.angular_velocity * r.y;
    const double tip_vy = s.vy + s.angular_velocity * r.x;
    const double fy = std::max(0.0, kLegStiffness * (-tip_y) - kLegDamping * tip_vy);
    const double fx = -kLegFriction * tip_vx;
    ax += fx;
    ay += fy;
    torque += r.x * fy - r.y * fx;
  }

  s.vx += ax * kDt;
  s.vy += ay * kDt;
  s.angular_velocity += torque / kInertia * kDt + spin_kick;
  s.x += s.vx * kDt;
  s.y += s.vy * kDt;
  s.angle += s.angular_velocity * kDt;

  StepResult result;
  result.observation = observation();
  const Observation& after = result.observation;
  if (hull_in_contact(s) || std::abs(s.x) >= kBoundX) {
    result.terminated = true;
    result.reward = kCrashReward;
  } else if (is_landed(after)) {
    result.terminated = true;
    result.reward = kSuccessReward;
  } else {
    result.reward = potential(after) - potential(before) - fuel;
  }
  finish_step(result);
  return result;
}

}  // namespace see::envs
