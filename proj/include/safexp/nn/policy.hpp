#pragma once

#include <cmath>

#include "safexp/nn/adam.hpp"
#include "safexp/nn/mlp.hpp"
#include "safexp/rng.hpp"
#include "safexp/types.hpp"

namespace safexp::nn {

template <class Scalar>
Scalar softplus(Scalar x) {
  return x > Scalar(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Stochastic tanh-squashed Gaussian policy. The trunk emits per-dimension
/// mean and log-std (clamped to [-20, 2]); sampling is reparameterized so
/// pathwise gradients reach the trunk through both the action and the
/// log-density.
template <class Scalar>
class GaussianPolicy {
 public:
  static constexpr Scalar kLogStdMin = Scalar(-20);
  static constexpr Scalar kLogStdMax = Scalar(2);

  GaussianPolicy() = default;
  GaussianPolicy(Index obs_dim, Index act_dim, const std::vector<Index>& hidden, Rng& rng)
      : act_dim_(act_dim) {
    std::vector<Index> dims;
    dims.push_back(obs_dim);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(2 * act_dim);
    net_ = Mlp<Scalar>(dims, rng);
  }

  Index obs_dim() const { return net_.input_dim(); }
  Index act_dim() const { return act_dim_; }
  Mlp<Scalar>& net() { return net_; }
  const Mlp<Scalar>& net() const { return net_; }

  struct Sample {
    Mat<Scalar> actions;    // act_dim x B, strictly inside (-1, 1)
    RowVec<Scalar> log_probs;  // 1 x B
    // cached intermediates for the reverse pass
    Mat<Scalar> mean, log_std, std_dev, noise, pre_tanh, raw;
    typename Mlp<Scalar>::Workspace ws;
  };

  Sample sample(const Mat<Scalar>& obs, Rng& rng) const {
    Mat<Scalar> eps(act_dim_, obs.cols());
    for (Index c = 0; c < eps.cols(); ++c)
      for (Index r = 0; r < eps.rows(); ++r) eps(r, c) = rng.normal<Scalar>();
    return sample_with_noise(obs, eps);
  }

  /// Deterministic path given explicit standard-normal noise; the basis for
  /// finite-difference checks of every pathwise loss.
  Sample sample_with_noise(const Mat<Scalar>& obs, const Mat<Scalar>& eps) const {
    Sample s;
    s.noise = eps;
    s.raw = net_.forward(obs, s.ws);
    const Index b = obs.cols();
    s.mean = s.raw.topRows(act_dim_);
    s.log_std = s.raw.bottomRows(act_dim_).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
    s.std_dev = s.log_std.array().exp().matrix();
    s.pre_tanh = s.mean + s.std_dev.cwiseProduct(eps);
    s.actions = s.pre_tanh.array().tanh().matrix();
    s.log_probs.resize(b);
    const Scalar half_log_two_pi = Scalar(0.5) * std::log(Scalar(2) * Scalar(M_PI));
    for (Index c = 0; c < b; ++c) {
      Scalar lp = 0;
      for (Index r = 0; r < act_dim_; ++r) {
        const Scalar e = eps(r, c);
        lp += -Scalar(0.5) * e * e - s.log_std(r, c) - half_log_two_pi;
        // log(1 - tanh(u)^2) = 2 (log 2 - u - softplus(-2u))
        const Scalar u = s.pre_tanh(r, c);
        lp -= Scalar(2) * (std::log(Scalar(2)) - u - softplus(Scalar(-2) * u));
      }
      s.log_probs[c] = lp;
    }
    return s;
  }

  /// Deterministic action (tanh of the mean head), used by evaluation probes.
  Mat<Scalar> mean_action(const Mat<Scalar>& obs) const {
    Mat<Scalar> raw = net_.forward(obs);
    return raw.topRows(act_dim_).array().tanh().matrix();
  }

  /// Accumulates trunk gradients for losses of the form
  ///   L = sum_b [ logp_coeff_b * log_prob_b ] + <d_actions, actions>.
  /// Returns nothing; grad must be sized to net().num_params().
  void backward(const Sample& s, const RowVec<Scalar>& logp_coeff,
                const Mat<Scalar>& d_actions, Vec<Scalar>* grad) const {
    const Index b = s.actions.cols();
    Mat<Scalar> d_u(act_dim_, b), d_mean(act_dim_, b), d_raw_logstd(act_dim_, b);
    for (Index c = 0; c < b; ++c) {
      for (Index r = 0; r < act_dim_; ++r) {
        const Scalar t = s.actions(r, c);
        Scalar du = d_actions(r, c) * (Scalar(1) - t * t);
        du += logp_coeff[c] * Scalar(2) * t;  // d(-log(1 - tanh^2 u))/du
        d_u(r, c) = du;
        d_mean(r, c) = du;
        Scalar dls = du * s.std_dev(r, c) * s.noise(r, c) - logp_coeff[c];
        const Scalar raw = s.raw(act_dim_ + r, c);
        if (raw <= kLogStdMin || raw >= kLogStdMax) dls = 0;  // saturated clamp
        d_raw_logstd(r, c) = dls;
      }
    }
    Mat<Scalar> d_out(2 * act_dim_, b);
    d_out.topRows(act_dim_) = d_mean;
    d_out.bottomRows(act_dim_) = d_raw_logstd;
    net_.backward(s.ws, d_out, grad);
  }

 private:
  Mlp<Scalar> net_;
  Index act_dim_ = 0;
};

/// SAC automatic entropy temperature, parameterized in log space with
/// loss E[-log_alpha * (log_pi + target_entropy)].
template <class Scalar>
class Temperature {
 public:
  Temperature() = default;
  Temperature(Scalar initial, Scalar target_entropy, Scalar lr)
      : target_entropy_(target_entropy), opt_(1, lr) {
    log_alpha_.resize(1);
    log_alpha_[0] = std::log(initial);
  }

  Scalar alpha() const { return std::exp(log_alpha_[0]); }
  Scalar log_alpha() const { return log_alpha_[0]; }
  void set_log_alpha(Scalar v) { log_alpha_[0] = v; }
  Scalar target_entropy() const { return target_entropy_; }

  Scalar loss(const RowVec<Scalar>& log_probs) const {
    return -(log_alpha_[0] * (log_probs.array() + target_entropy_)).mean();
  }

  void update(const RowVec<Scalar>& log_probs) {
    Vec<Scalar> g(1);
    g[0] = -(log_probs.array() + target_entropy_).mean();
    opt_.step(log_alpha_, g);
  }

 private:
  Scalar target_entropy_ = 0;
  Vec<Scalar> log_alpha_;
  Adam<Scalar> opt_;
};

}  // namespace safexp::nn
