#include "gmkf/ensemble.hpp"

#include <stdexcept>

namespace gmkf {

Eigen::VectorXd ensemble_mean(const Ensemble& e) {
  if (e.size() == 0) throw std::invalid_argument("ensemble_mean: empty ensemble");
  return e.members.rowwise().mean();
}

Eigen::MatrixXd ensemble_covariance(const Ensemble& a, const Ensemble& b) {
  const Eigen::Index S = a.size();
  if (S != b.size()) throw std::invalid_argument("ensemble_covariance: size mismatch");
  if (S < 2) throw std::invalid_argument("ensemble_covariance: need at least two members");
  const Eigen::MatrixXd ac = a.members.colwise() - ensemble_mean(a);
  const Eigen::MatrixXd bc = b.members.colwise() - ensemble_mean(b);
  return (ac * bc.transpose()) / static_cast<double>(S - 1);
}

Eigen::MatrixXd ensemble_covariance(const Ensemble& a) { return ensemble_covariance(a, a); }

Ensemble sample_ensemble(const PceVector& v, Eigen::Index S, Rng& rng) {
  Ensemble e;
  e.germ_samples = rng.normal_matrix(v.germ_end(), S);
  e.members = evaluate(v, *e.germ_samples);
  return e;
}

} // namespace gmkf
