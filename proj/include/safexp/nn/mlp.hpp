#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "safexp/rng.hpp"
#include "safexp/types.hpp"

namespace safexp::nn {

/// Fully-connected network with rectified-linear hidden units and a linear
/// output layer. Parameters live in one flat vector so optimizer steps, EMA
/// tracking and checkpointing are plain vector ops; per-layer weights are
/// exposed as Eigen maps into that vector.
template <class Scalar>
class Mlp {
 public:
  using MatS = Mat<Scalar>;
  using VecS = Vec<Scalar>;
  using WeightMap = Eigen::Map<MatS>;
  using ConstWeightMap = Eigen::Map<const MatS>;
  using BiasMap = Eigen::Map<VecS>;
  using ConstBiasMap = Eigen::Map<const VecS>;

  Mlp() = default;

  /// dims = {input, hidden..., output}. Weights and biases start uniform in
  /// [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  Mlp(std::vector<Index> dims, Rng& rng) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw std::invalid_argument("Mlp: need at least two dims");
    Index total = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      offsets_.push_back(total);
      total += dims_[l + 1] * dims_[l] + dims_[l + 1];
    }
    params_.resize(total);
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      const Scalar k = Scalar(1) / std::sqrt(static_cast<Scalar>(dims_[l]));
      WeightMap w = weight(l);
      BiasMap b = bias(l);
      for (Index j = 0; j < w.size(); ++j) w.data()[j] = rng.uniform<Scalar>(-k, k);
      for (Index j = 0; j < b.size(); ++j) b[j] = rng.uniform<Scalar>(-k, k);
    }
  }

  Index num_layers() const { return static_cast<Index>(dims_.size()) - 1; }
  Index input_dim() const { return dims_.front(); }
  Index output_dim() const { return dims_.back(); }
  const std::vector<Index>& dims() const { return dims_; }

  VecS& params() { return params_; }
  const VecS& params() const { return params_; }
  Index num_params() const { return params_.size(); }

  WeightMap weight(std::size_t l) {
    return WeightMap(params_.data() + offsets_[l], dims_[l + 1], dims_[l]);
  }
  ConstWeightMap weight(std::size_t l) const {
    return ConstWeightMap(params_.data() + offsets_[l], dims_[l + 1], dims_[l]);
  }
  BiasMap bias(std::size_t l) {
    return BiasMap(params_.data() + offsets_[l] + dims_[l + 1] * dims_[l], dims_[l + 1]);
  }
  ConstBiasMap bias(std::size_t l) const {
    return ConstBiasMap(params_.data() + offsets_[l] + dims_[l + 1] * dims_[l], dims_[l + 1]);
  }

  /// Stored activations from a forward pass; act[l] is the input of layer l,
  /// pre[l] its pre-activation output.
  struct Workspace {
    std::vector<MatS> act;
    std::vector<MatS> pre;
  };

  /// Input and output are (dim x batch).
  MatS forward(const MatS& x) const {
    Workspace ws;
    return forward(x, ws);
  }

  MatS forward(const MatS& x, Workspace& ws) const {
    if (x.rows() != input_dim()) throw std::invalid_argument("Mlp::forward: input dim mismatch");
    const Index layers = num_layers();
    ws.act.resize(layers);
    ws.pre.resize(layers);
    ws.act[0] = x;
    for (Index l = 0; l < layers; ++l) {
      ws.pre[l].noalias() = weight(l) * ws.act[l];
      ws.pre[l].colwise() += bias(l);
      if (l + 1 < layers) ws.act[l + 1] = ws.pre[l].cwiseMax(Scalar(0));
    }
    return ws.pre[layers - 1];
  }

  /// Reverse pass. dL/doutput is (out x batch); returns dL/dinput. When grad
  /// is non-null the flat parameter gradient is accumulated into it (it must
  /// already have num_params() entries).
  MatS backward(const Workspace& ws, const MatS& d_out, VecS* grad) const {
    const Index layers = num_layers();
    MatS delta = d_out;
    MatS d_in;
    for (Index l = layers - 1; l >= 0; --l) {
      if (grad != nullptr) {
        Eigen::Map<MatS> wg(grad->data() + offsets_[l], dims_[l + 1], dims_[l]);
        Eigen::Map<VecS> bg(grad->data() + offsets_[l] + dims_[l + 1] * dims_[l], dims_[l + 1]);
        wg.noalias() += delta * ws.act[l].transpose();
        bg.noalias() += delta.rowwise().sum();
      }
      d_in.noalias() = weight(l).transpose() * delta;
      if (l > 0) {
        delta = d_in.cwiseProduct(
            (ws.pre[l - 1].array() > Scalar(0)).template cast<Scalar>().matrix());
      }
    }
    return d_in;
  }

  VecS zero_grad() const { return VecS::Zero(params_.size()); }

 private:
  std::vector<Index> dims_;
  std::vector<Index> offsets_;
  VecS params_;
};

}  // namespace safexp::nn
