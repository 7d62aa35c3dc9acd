#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

#include "safexp/rng.hpp"
#include "safexp/types.hpp"

namespace safexp::env {

/// Piecewise-linear constraint margin for one bounded variable:
/// max{-1 - 2(v - mid)/range, 2(v - mid)/range - 1}. Lies in [-1, 0] inside
/// [lo, hi], positive outside.
template <class Scalar>
Scalar bound_margin(Scalar v, Scalar lo, Scalar hi) {
  const Scalar mid = (lo + hi) / Scalar(2);
  const Scalar z = Scalar(2) * (v - mid) / (hi - lo);
  return std::max(-Scalar(1) - z, z - Scalar(1));
}

/// Goal-conditioned continuous CartPole. State (x, x_dot, theta, theta_dot),
/// force command a in [-1, 1] mapped to +-10 N, explicit Euler at dt = 0.02 s.
/// A step is a mistake (terminal) when the constraint margin turns positive,
/// i.e. |x| > 2.4 m or |theta| > 0.41 rad.
template <class Scalar>
class CartPoleGC {
 public:
  static constexpr int kStateDim = 4;
  static constexpr int kActionDim = 1;
  static constexpr int kGoalDim = 1;

  struct State {
    Scalar x = 0;
    Scalar x_dot = 0;
    Scalar theta = 0;
    Scalar theta_dot = 0;

    Eigen::Matrix<Scalar, 4, 1> vec() const { return {x, x_dot, theta, theta_dot}; }
    static State from_vec(const Eigen::Matrix<Scalar, 4, 1>& v) {
      return {v[0], v[1], v[2], v[3]};
    }
  };

  struct StepResult {
    State next_state;
    Scalar r_safety = 0;   // 1 iff next_state in N0
    Scalar r_goal = 0;     // 1 iff |x - g| < 0.05
    Scalar h = 0;          // constraint margin of next_state
    bool terminated = false;
    bool truncated = false;
  };

  // Bounds and reward sets
  static constexpr Scalar kXLimit = Scalar(2.4);
  static constexpr Scalar kThetaLimit = Scalar(0.41);
  static constexpr Scalar kGoalRange = Scalar(2.16);
  static constexpr Scalar kGoalRadius = Scalar(0.05);
  static constexpr Scalar kSafeSetX = Scalar(2.2);
  static constexpr Scalar kSafeSetOther = Scalar(0.05);
  static constexpr int kMaxEpisodeSteps = 500;

  // Dynamics constants (classic cart-pole, Euler, dt = 0.02)
  static constexpr Scalar kGravity = Scalar(9.8);
  static constexpr Scalar kMassCart = Scalar(1.0);
  static constexpr Scalar kMassPole = Scalar(0.1);
  static constexpr Scalar kHalfLength = Scalar(0.5);
  static constexpr Scalar kMaxForce = Scalar(10.0);
  static constexpr Scalar kDt = Scalar(0.02);

  static Scalar constraint_h(const State& s) {
    return std::max(bound_margin(s.x, -kXLimit, kXLimit),
                    bound_margin(s.theta, -kThetaLimit, kThetaLimit));
  }

  static bool in_safe_set(const State& s) {
    return std::abs(s.x) <= kSafeSetX && std::abs(s.x_dot) <= kSafeSetOther &&
           std::abs(s.theta) <= kSafeSetOther && std::abs(s.theta_dot) <= kSafeSetOther;
  }

  static StepResult step(const State& s, Scalar action, Scalar goal, int step_count) {
    if (constraint_h(s) > Scalar(0))
      throw std::logic_error("CartPoleGC::step: stepping a terminal state");
    if (step_count >= kMaxEpisodeSteps)
      throw std::logic_error("CartPoleGC::step: episode already truncated");

    const Scalar a = std::clamp(action, Scalar(-1), Scalar(1));
    const Scalar force = kMaxForce * a;
    const Scalar total_mass = kMassCart + kMassPole;
    const Scalar pole_mass_length = kMassPole * kHalfLength;

    const Scalar cos_t = std::cos(s.theta);
    const Scalar sin_t = std::sin(s.theta);
    const Scalar temp =
        (force + pole_mass_length * s.theta_dot * s.theta_dot * sin_t) / total_mass;
    const Scalar theta_acc =
        (kGravity * sin_t - cos_t * temp) /
        (kHalfLength * (Scalar(4) / Scalar(3) - kMassPole * cos_t * cos_t / total_mass));
    const Scalar x_acc = temp - pole_mass_length * theta_acc * cos_t / total_mass;

    StepResult out;
    out.next_state.x = s.x + kDt * s.x_dot;
    out.next_state.x_dot = s.x_dot + kDt * x_acc;
    out.next_state.theta = s.theta + kDt * s.theta_dot;
    out.next_state.theta_dot = s.theta_dot + kDt * theta_acc;

    out.h = constraint_h(out.next_state);
    out.terminated = out.h > Scalar(0);
    out.r_safety = in_safe_set(out.next_state) ? Scalar(1) : Scalar(0);
    out.r_goal = std::abs(out.next_state.x - goal) < kGoalRadius ? Scalar(1) : Scalar(0);
    out.truncated = !out.terminated && (step_count + 1 >= kMaxEpisodeSteps);
    return out;
  }

  /// Pretraining reset: uniform over a box strictly inside the safe region.
  static State reset_anywhere(Rng& rng) {
    State s;
    s.x = rng.uniform<Scalar>(Scalar(-2.2), Scalar(2.2));
    s.x_dot = rng.uniform<Scalar>(Scalar(-1), Scalar(1));
    s.theta = rng.uniform<Scalar>(Scalar(-0.35), Scalar(0.35));
    s.theta_dot = rng.uniform<Scalar>(Scalar(-1), Scalar(1));
    return s;
  }

  /// Exploration reset: small noise around equilibrium plus a fresh goal.
  static std::pair<State, Scalar> reset_noisy(Rng& rng) {
    State s;
    s.x = rng.uniform<Scalar>(Scalar(-0.05), Scalar(0.05));
    s.x_dot = rng.uniform<Scalar>(Scalar(-0.05), Scalar(0.05));
    s.theta = rng.uniform<Scalar>(Scalar(-0.05), Scalar(0.05));
    s.theta_dot = rng.uniform<Scalar>(Scalar(-0.05), Scalar(0.05));
    const Scalar goal = rng.uniform<Scalar>(-kGoalRange, kGoalRange);
    return {s, goal};
  }

  static Scalar achieved_goal(const State& s) { return s.x; }

  static Scalar goal_reward(const State& next, Scalar goal) {
    return std::abs(next.x - goal) < kGoalRadius ? Scalar(1) : Scalar(0);
  }
};

}  // namespace safexp::env
