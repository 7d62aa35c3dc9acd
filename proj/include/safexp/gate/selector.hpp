#pragma once

#include "safexp/types.hpp"

namespace safexp::gate {

/// Persistent switching state of the action gate. The flag starts lowered
/// (goal policy acts) at each episode and the thresholds must satisfy
/// th_lower <= th_raise.
template <class Scalar>
struct SelectorState {
  bool safety_flag = false;
  Scalar th_raise = Scalar(70);   // GC -> safety
  Scalar th_lower = Scalar(30);   // safety -> GC
};

template <class Scalar>
struct SelectionRecord {
  bool flag_before = false;
  bool flag_after = false;
  Scalar risk_gc = 0;
  Scalar risk_safe = 0;
  bool safety_acted = false;
};

/// flag <- (flag and lower) or raise, with lower/raise evaluated on the two
/// candidate actions' risks. Lowering is applied before raising.
inline bool update_flag(bool flag, bool lower, bool raise) {
  flag = flag && lower;
  flag = flag || raise;
  return flag;
}

/// One gate decision given the risks of both freshly sampled candidates.
/// Returns the record; the flag in `state` is updated in place.
template <class Scalar>
SelectionRecord<Scalar> gate_step(SelectorState<Scalar>& state, Scalar risk_gc, Scalar risk_safe) {
  SelectionRecord<Scalar> rec;
  rec.flag_before = state.safety_flag;
  rec.risk_gc = risk_gc;
  rec.risk_safe = risk_safe;
  const bool lower = risk_gc > state.th_lower;
  const bool raise = risk_safe > state.th_raise;
  state.safety_flag = update_flag(state.safety_flag, lower, raise);
  rec.flag_after = state.safety_flag;
  rec.safety_acted = state.safety_flag;
  return rec;
}

/// Full selection step: samples both candidates, evaluates the risk of each,
/// updates the flag and returns the action that executes. SampleGc/SampleSafe
/// yield action vectors; RiskFn maps an action vector to a scalar risk.
template <class Scalar, class SampleGc, class SampleSafe, class RiskFn>
std::pair<Vec<Scalar>, SelectionRecord<Scalar>> select_action(SelectorState<Scalar>& state,
                                                              SampleGc&& sample_gc,
                                                              SampleSafe&& sample_safe,
                                                              RiskFn&& risk_of) {
  const Vec<Scalar> a_gc = sample_gc();
  const Vec<Scalar> a_safe = sample_safe();
  const Scalar risk_gc = risk_of(a_gc);
  const Scalar risk_safe = risk_of(a_safe);
  SelectionRecord<Scalar> rec = gate_step(state, risk_gc, risk_safe);
  return {rec.safety_acted ? a_safe : a_gc, rec};
}

}  // namespace safexp::gate
