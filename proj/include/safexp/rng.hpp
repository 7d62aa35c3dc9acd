#pragma once

#include <cstdint>
#include <random>

namespace safexp {

/// Derives independent sub-seeds from a master seed (splitmix64 over the
/// pair), so that each component of a run owns its own stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  template <class Scalar>
  Scalar uniform(Scalar lo, Scalar hi) {
    return static_cast<Scalar>(std::uniform_real_distribution<double>(
        static_cast<double>(lo), static_cast<double>(hi))(gen_));
  }

  template <class Scalar>
  Scalar normal() {
    return static_cast<Scalar>(normal_(gen_));
  }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace safexp
