#pragma once

#include <cmath>
#include <stdexcept>

#include "safexp/types.hpp"

namespace safexp::critic {

/// Midpoint cumulative probabilities tau_i = (2i - 1) / (2N), i = 1..N.
template <class Scalar>
Vec<Scalar> cum_probs(Index n) {
  if (n < 1) throw std::invalid_argument("cum_probs: need n >= 1");
  Vec<Scalar> taus(n);
  for (Index i = 0; i < n; ++i)
    taus[i] = (Scalar(2) * static_cast<Scalar>(i + 1) - Scalar(1)) /
              (Scalar(2) * static_cast<Scalar>(n));
  return taus;
}

namespace detail {
template <class Scalar>
Scalar huber1(Scalar u) {
  const Scalar a = std::abs(u);
  return a <= Scalar(1) ? Scalar(0.5) * u * u : a - Scalar(0.5);
}
template <class Scalar>
Scalar huber1_deriv(Scalar u) {
  return u > Scalar(1) ? Scalar(1) : (u < Scalar(-1) ? Scalar(-1) : u);
}
}  // namespace detail

/// Quantile-regression Huber loss (kappa = 1) between one atom vector and a
/// set of target samples: mean over all (atom, target) pairs of
/// |tau_i - 1{u<0}| * Huber(u), u = target - atom.
template <class Scalar>
Scalar quantile_huber_loss(const Vec<Scalar>& atoms, const Vec<Scalar>& targets,
                           const Vec<Scalar>& probs) {
  if (atoms.size() != probs.size())
    throw std::invalid_argument("quantile_huber_loss: atoms/probs mismatch");
  if (targets.size() < 1) throw std::invalid_argument("quantile_huber_loss: no targets");
  Scalar acc = 0;
  for (Index i = 0; i < atoms.size(); ++i) {
    for (Index k = 0; k < targets.size(); ++k) {
      const Scalar u = targets[k] - atoms[i];
      const Scalar w = std::abs(probs[i] - (u < Scalar(0) ? Scalar(1) : Scalar(0)));
      acc += w * detail::huber1(u);
    }
  }
  return acc / static_cast<Scalar>(atoms.size() * targets.size());
}

/// Batched loss with gradient. atoms is (N x B), targets (K x B); the loss is
/// additionally averaged over the batch and d_atoms receives dL/datoms.
template <class Scalar>
Scalar quantile_huber_loss_grad(const Mat<Scalar>& atoms, const Mat<Scalar>& targets,
                                const Vec<Scalar>& probs, Mat<Scalar>& d_atoms) {
  const Index n = atoms.rows(), k = targets.rows(), b = atoms.cols();
  if (targets.cols() != b) throw std::invalid_argument("quantile_huber_loss_grad: batch mismatch");
  d_atoms.setZero(n, b);
  Scalar acc = 0;
  const Scalar scale = Scalar(1) / static_cast<Scalar>(n * k * b);
  for (Index c = 0; c < b; ++c) {
    for (Index i = 0; i < n; ++i) {
      const Scalar a = atoms(i, c);
      const Scalar tau = probs[i];
      Scalar g = 0;
      for (Index j = 0; j < k; ++j) {
        const Scalar u = targets(j, c) - a;
        const Scalar w = std::abs(tau - (u < Scalar(0) ? Scalar(1) : Scalar(0)));
        acc += w * detail::huber1(u);
        g -= w * detail::huber1_deriv(u);
      }
      d_atoms(i, c) = g * scale;
    }
  }
  return acc * scale;
}

}  // namespace safexp::critic
