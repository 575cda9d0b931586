#pragma once

#include <Eigen/Core>

#include <optional>

#include "gmkf/pce_vector.hpp"

namespace gmkf {

/// Sample cloud of a vector-valued random variable, one member per column.
/// When the members were produced by evaluating PCE vectors, `germ_samples`
/// keeps the underlying germ draws so correlated variables (state and
/// predicted observation, say) can be sampled consistently.
struct Ensemble {
  Eigen::MatrixXd members; // D x S
  std::optional<Eigen::MatrixXd> germ_samples; // G x S

  Eigen::Index dim() const { return members.rows(); }
  Eigen::Index size() const { return members.cols(); }
};

Eigen::VectorXd ensemble_mean(const Ensemble& e);

/// Unbiased sample cross-covariance, 1/(S-1) normalization; needs S >= 2 and
/// matching sizes.
Eigen::MatrixXd ensemble_covariance(const Ensemble& a, const Ensemble& b);
Eigen::MatrixXd ensemble_covariance(const Ensemble& a);

/// Draw S members of v (the germ draws are stored on the result).
Ensemble sample_ensemble(const PceVector& v, Eigen::Index S, Rng& rng);

} // namespace gmkf
