#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "safexp/env/cartpole.hpp"
#include "safexp/rng.hpp"
#include "safexp/types.hpp"

namespace safexp::env {

/// One-dimensional drift world used as a dynamic-programming oracle for the
/// critics: pos' = pos + 0.1 * clip(a), terminal beyond |pos| > 2.4, safety
/// reward inside [-0.1, 0.1]. Same constraint shape as CartPoleGC's x axis.
template <class Scalar>
class ChainWorld {
 public:
  static constexpr int kStateDim = 1;
  static constexpr int kActionDim = 1;

  struct State {
    Scalar pos = 0;
    Eigen::Matrix<Scalar, 1, 1> vec() const { return Eigen::Matrix<Scalar, 1, 1>{pos}; }
  };

  struct StepResult {
    State next_state;
    Scalar r_safety = 0;
    Scalar h = 0;
    bool terminated = false;
    bool truncated = false;
  };

  static constexpr Scalar kBound = Scalar(2.4);
  static constexpr Scalar kStepSize = Scalar(0.1);
  static constexpr Scalar kSafeRadius = Scalar(0.1);
  static constexpr int kMaxEpisodeSteps = 500;

  static Scalar constraint_h(const State& s) {
    return bound_margin(s.pos, -kBound, kBound);
  }

  static StepResult step(const State& s, Scalar action, int step_count) {
    StepResult out;
    out.next_state.pos = s.pos + kStepSize * std::clamp(action, Scalar(-1), Scalar(1));
    out.h = constraint_h(out.next_state);
    out.terminated = std::abs(out.next_state.pos) > kBound;
    out.r_safety = std::abs(out.next_state.pos) <= kSafeRadius ? Scalar(1) : Scalar(0);
    out.truncated = !out.terminated && (step_count + 1 >= kMaxEpisodeSteps);
    return out;
  }

  static State reset_anywhere(Rng& rng) {
    return {rng.uniform<Scalar>(Scalar(-2.2), Scalar(2.2))};
  }

  /// The optimal drive-to-origin action, used by oracle tests.
  static Scalar greedy_action(const State& s) {
    return std::clamp(-s.pos / kStepSize, Scalar(-1), Scalar(1));
  }
};

}  // namespace safexp::env
