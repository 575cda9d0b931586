#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace gmkf {

/// Deterministic random stream.  Gaussian draws use an explicit Box-Muller
/// pair (no reliance on library-internal distribution state), so a given
/// seed reproduces the same sequence byte-for-byte on one platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Derive an independent stream; fork(k) of the same parent is stable.
  Rng fork(std::uint64_t stream) const;

  double uniform();              // [0, 1)
  double normal();               // standard Gaussian
  Eigen::VectorXd normal_vector(Eigen::Index n);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 scrambler used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t x);

} // namespace gmkf
