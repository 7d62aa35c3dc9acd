#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "safexp/types.hpp"

namespace safexp::nn {

/// Adaptive-moment optimizer over a flat parameter vector,
/// (beta1, beta2, eps) = (0.9, 0.999, 1e-8).
template <class Scalar>
class Adam {
 public:
  Adam() = default;
  explicit Adam(Index n, Scalar lr = Scalar(3e-4)) : lr_(lr) {
    m_ = Vec<Scalar>::Zero(n);
    v_ = Vec<Scalar>::Zero(n);
  }

  Scalar learning_rate() const { return lr_; }
  long step_count() const { return t_; }

  void step(Vec<Scalar>& params, const Vec<Scalar>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
      throw std::invalid_argument("Adam::step: size mismatch");
    if (!grads.allFinite())
      throw std::runtime_error("Adam::step: non-finite gradient at step " +
                               std::to_string(t_ + 1));
    ++t_;
    m_ = beta1_ * m_ + (Scalar(1) - beta1_) * grads;
    v_.array() = beta2_ * v_.array() + (Scalar(1) - beta2_) * grads.array().square();
    const Scalar bc1 = Scalar(1) - std::pow(beta1_, static_cast<Scalar>(t_));
    const Scalar bc2 = Scalar(1) - std::pow(beta2_, static_cast<Scalar>(t_));
    params.array() -=
        lr_ * (m_.array() / bc1) / ((v_.array() / bc2).sqrt() + eps_);
  }

 private:
  Scalar lr_ = Scalar(3e-4);
  Scalar beta1_ = Scalar(0.9);
  Scalar beta2_ = Scalar(0.999);
  Scalar eps_ = Scalar(1e-8);
  Vec<Scalar> m_, v_;
  long t_ = 0;
};

/// target <- (1 - tau) * target + tau * online
template <class Scalar>
void ema_update(Vec<Scalar>& target, const Vec<Scalar>& online, Scalar tau) {
  target = (Scalar(1) - tau) * target + tau * online;
}

}  // namespace safexp::nn
