#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "safexp/critic/quantile.hpp"
#include "safexp/nn/mlp.hpp"
#include "safexp/rng.hpp"
#include "safexp/types.hpp"

namespace safexp::critic {

/// Ensemble of M quantile critics with EMA target copies. Each critic maps a
/// (state, action) column to N atom values; atom i carries cumulative
/// probability (2i-1)/(2N) by position. Critics share batches but are
/// initialized from different seeds and updated separately.
template <class Scalar>
struct QuantileEnsemble {
  std::vector<nn::Mlp<Scalar>> online;
  std::vector<nn::Mlp<Scalar>> target;
  Vec<Scalar> probs;

  QuantileEnsemble() = default;
  QuantileEnsemble(Index input_dim, const std::vector<Index>& hidden, Index num_critics,
                   Index num_atoms, std::uint64_t seed) {
    std::vector<Index> dims;
    dims.push_back(input_dim);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(num_atoms);
    for (Index m = 0; m < num_critics; ++m) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
      online.emplace_back(dims, rng);
    }
    target = online;  // targets start equal to online copies
    probs = cum_probs<Scalar>(num_atoms);
  }

  Index size() const { return static_cast<Index>(online.size()); }
  Index num_atoms() const { return probs.size(); }

  /// Online atoms at a single (obs, act): one row per critic.
  Mat<Scalar> online_atoms(const Vec<Scalar>& obs, const Vec<Scalar>& act) const {
    Vec<Scalar> in(obs.size() + act.size());
    in << obs, act;
    Mat<Scalar> out(size(), num_atoms());
    for (Index m = 0; m < size(); ++m) out.row(m) = online[m].forward(in).col(0).transpose();
    return out;
  }
};

/// TQC backup: pool all target atoms at (s', a'), sort, drop the
/// drop_per_critic * M largest, then map through r + gamma * z with no
/// bootstrap on terminal transitions. Output is (K x B) with
/// K = M * N - drop_per_critic * M; the same pooled targets serve every
/// online critic.
template <class Scalar>
Mat<Scalar> tqc_value_target(const QuantileEnsemble<Scalar>& ens, const Mat<Scalar>& next_input,
                             const RowVec<Scalar>& reward, const std::vector<char>& terminated,
                             Scalar gamma, Index drop_per_critic) {
  const Index m = ens.size(), n = ens.num_atoms(), b = next_input.cols();
  if (drop_per_critic < 0 || drop_per_critic >= n)
    throw std::invalid_argument("tqc_value_target: bad truncation");
  Mat<Scalar> pooled(m * n, b);
  for (Index i = 0; i < m; ++i)
    pooled.middleRows(i * n, n) = ens.target[i].forward(next_input);
  const Index keep = m * n - drop_per_critic * m;
  Mat<Scalar> out(keep, b);
  std::vector<Scalar> col(static_cast<std::size_t>(m * n));
  for (Index c = 0; c < b; ++c) {
    for (Index r = 0; r < m * n; ++r) col[static_cast<std::size_t>(r)] = pooled(r, c);
    std::sort(col.begin(), col.end());
    const Scalar bootstrap = terminated[static_cast<std::size_t>(c)] ? Scalar(0) : gamma;
    for (Index r = 0; r < keep; ++r)
      out(r, c) = reward[c] + bootstrap * col[static_cast<std::size_t>(r)];
  }
  return out;
}

/// Reachability backup (max-based): per critic and atom,
/// (1 - gamma) h(s') + gamma * max(h(s'), target_atom), collapsing to h(s')
/// on termination. No cross-critic pooling; entry m feeds online critic m.
template <class Scalar>
std::vector<Mat<Scalar>> reachability_target(const QuantileEnsemble<Scalar>& ens,
                                             const Mat<Scalar>& next_input,
                                             const RowVec<Scalar>& h_next,
                                             const std::vector<char>& terminated, Scalar gamma) {
  const Index m = ens.size(), b = next_input.cols();
  std::vector<Mat<Scalar>> out(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    Mat<Scalar> atoms = ens.target[i].forward(next_input);
    for (Index c = 0; c < b; ++c) {
      const Scalar h = h_next[c];
      if (terminated[static_cast<std::size_t>(c)]) {
        atoms.col(c).setConstant(h);
      } else {
        for (Index r = 0; r < atoms.rows(); ++r)
          atoms(r, c) = (Scalar(1) - gamma) * h + gamma * std::max(h, atoms(r, c));
      }
    }
    out[static_cast<std::size_t>(i)] = std::move(atoms);
  }
  return out;
}

/// Flat mean over all M * N atoms (rows = critics).
template <class Scalar>
Scalar ensemble_mean_atoms(const Mat<Scalar>& atoms) {
  return atoms.mean();
}

/// Mean of atoms whose cumulative probability strictly exceeds tau, pooled
/// across critics; falls back to the highest-probability atom of each critic
/// when the strict selection is empty.
template <class Scalar>
Scalar tail_mean_atoms(const Mat<Scalar>& atoms, const Vec<Scalar>& probs, Scalar tau) {
  Scalar acc = 0;
  Index count = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    if (probs[i] > tau) {
      acc += atoms.col(i).sum();
      count += atoms.rows();
    }
  }
  if (count == 0) {
    acc = atoms.col(atoms.cols() - 1).sum();
    count = atoms.rows();
  }
  return acc / static_cast<Scalar>(count);
}

/// Mean over unordered critic pairs of the L1 distance between sorted atom
/// vectors, divided by the atom count.
template <class Scalar>
Scalar disagreement_l1_atoms(const Mat<Scalar>& atoms) {
  const Index m = atoms.rows(), n = atoms.cols();
  if (m < 2) throw std::invalid_argument("disagreement_l1: need at least two critics");
  std::vector<Vec<Scalar>> sorted(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    Vec<Scalar> row = atoms.row(i).transpose();
    std::sort(row.data(), row.data() + n);
    sorted[static_cast<std::size_t>(i)] = std::move(row);
  }
  Scalar acc = 0;
  Index pairs = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j) {
      acc += (sorted[static_cast<std::size_t>(i)] - sorted[static_cast<std::size_t>(j)])
                 .cwiseAbs()
                 .sum();
      ++pairs;
    }
  return acc / (static_cast<Scalar>(pairs) * static_cast<Scalar>(n));
}

template <class Scalar>
Scalar ensemble_mean(const QuantileEnsemble<Scalar>& ens, const Vec<Scalar>& obs,
                     const Vec<Scalar>& act) {
  return ensemble_mean_atoms(ens.online_atoms(obs, act));
}

template <class Scalar>
Scalar tail_mean(const QuantileEnsemble<Scalar>& ens, const Vec<Scalar>& obs,
                 const Vec<Scalar>& act, Scalar tau) {
  return tail_mean_atoms(ens.online_atoms(obs, act), ens.probs, tau);
}

template <class Scalar>
Scalar disagreement_l1(const QuantileEnsemble<Scalar>& ens, const Vec<Scalar>& obs,
                       const Vec<Scalar>& act) {
  return disagreement_l1_atoms(ens.online_atoms(obs, act));
}

}  // namespace safexp::critic
