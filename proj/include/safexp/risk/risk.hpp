#pragma once

#include <cmath>
#include <string>

#include "safexp/critic/ensemble.hpp"
#include "safexp/types.hpp"

namespace safexp::risk {

enum class Strategy { kTime, kConstraint, kTimeConstraint };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kTime: return "time";
    case Strategy::kConstraint: return "constraint";
    case Strategy::kTimeConstraint: return "time-constraint";
  }
  return "?";
}

template <class Scalar>
struct RiskParams {
  Strategy strategy = Strategy::kTimeConstraint;
  Scalar tau = Scalar(0.9);       // tail level: mean of the worst (1 - tau) share
  Scalar epsilon = Scalar(0.1);   // constraint margin for the combined strategy
  Scalar t_max = Scalar(500);     // maximum episode steps
  Scalar gamma = Scalar(0.99);
};

/// Decreasing bijection from discounted safety return to steps-to-safety:
/// f(x) = log((1 - gamma) x) / log(gamma), with the input clamped into the
/// valid return range so stray atoms map to finite extreme times.
template <class Scalar>
Scalar f_gamma(Scalar x, Scalar gamma) {
  constexpr Scalar kMinClamp = Scalar(1e-6);
  const Scalar hi = Scalar(1) / (Scalar(1) - gamma) - kMinClamp * gamma;
  const Scalar xc = std::clamp(x, kMinClamp, hi);
  return std::log((Scalar(1) - gamma) * xc) / std::log(gamma);
}

/// Inverse of f_gamma on its clamped range: x = gamma^t / (1 - gamma).
template <class Scalar>
Scalar f_gamma_inverse(Scalar t, Scalar gamma) {
  return std::exp(t * std::log(gamma)) / (Scalar(1) - gamma);
}

/// Worst-tail mean of the time-to-safety distribution induced by the value
/// atoms. f_gamma is decreasing, so the atom at value-quantile tau_i becomes
/// the time quantile at 1 - tau_i; the tau-upper-tail of time is therefore
/// selected on the low-value side with reflected probabilities.
template <class Scalar>
Scalar time_risk_atoms(const Mat<Scalar>& value_atoms, const Vec<Scalar>& probs, Scalar tau,
                       Scalar gamma) {
  Scalar acc = 0;
  Index count = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    if (Scalar(1) - probs[i] > tau) {
      for (Index m = 0; m < value_atoms.rows(); ++m)
        acc += f_gamma(value_atoms(m, i), gamma);
      count += value_atoms.rows();
    }
  }
  if (count == 0) {
    for (Index m = 0; m < value_atoms.rows(); ++m) acc += f_gamma(value_atoms(m, 0), gamma);
    count = value_atoms.rows();
  }
  return acc / static_cast<Scalar>(count);
}

template <class Scalar>
Scalar time_risk(const critic::QuantileEnsemble<Scalar>& value, const Vec<Scalar>& obs,
                 const Vec<Scalar>& act, const RiskParams<Scalar>& p) {
  return time_risk_atoms(value.online_atoms(obs, act), value.probs, p.tau, p.gamma);
}

/// Worst-tail mean of the reachability distribution (high h is dangerous, so
/// this is a plain upper tail).
template <class Scalar>
Scalar constraint_risk(const critic::QuantileEnsemble<Scalar>& reach, const Vec<Scalar>& obs,
                       const Vec<Scalar>& act, const RiskParams<Scalar>& p) {
  return critic::tail_mean_atoms(reach.online_atoms(obs, act), reach.probs, p.tau);
}

/// Combined rule: a reachability tail above -epsilon saturates the risk to
/// T_max, otherwise the time estimate passes through.
template <class Scalar>
Scalar time_constraint_risk(const critic::QuantileEnsemble<Scalar>& value,
                            const critic::QuantileEnsemble<Scalar>& reach,
                            const Vec<Scalar>& obs, const Vec<Scalar>& act,
                            const RiskParams<Scalar>& p) {
  if (constraint_risk(reach, obs, act, p) > -p.epsilon) return p.t_max;
  return time_risk(value, obs, act, p);
}

/// Strategy dispatch over a safety agent's two ensembles.
template <class Scalar>
Scalar evaluate(const critic::QuantileEnsemble<Scalar>& value,
                const critic::QuantileEnsemble<Scalar>& reach, const Vec<Scalar>& obs,
                const Vec<Scalar>& act, const RiskParams<Scalar>& p) {
  switch (p.strategy) {
    case Strategy::kTime: return time_risk(value, obs, act, p);
    case Strategy::kConstraint: return constraint_risk(reach, obs, act, p);
    case Strategy::kTimeConstraint: return time_constraint_risk(value, reach, obs, act, p);
  }
  return p.t_max;
}

}  // namespace safexp::risk
