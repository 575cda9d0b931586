#include "gmkf/polynomial_map.hpp"

#include <Eigen/Dense>

#include <sstream>
#include <stdexcept>

namespace gmkf {

Eigen::MatrixXd monomial_features(const MultiIndexSet& features, const Eigen::MatrixXd& Z) {
  if (Z.rows() != features.dim)
    throw std::invalid_argument("monomial_features: input dimension mismatch");
  const Eigen::Index S = Z.cols();
  const int F = features.size();

  // Univariate power tables per input dimension.
  int maxdeg = 0;
  for (const auto& g : features.indices)
    for (int e : g) maxdeg = std::max(maxdeg, e);
  std::vector<Eigen::MatrixXd> pow(features.dim);
  for (int k = 0; k < features.dim; ++k) {
    pow[k].resize(S, maxdeg + 1);
    pow[k].col(0).setOnes();
    for (int j = 1; j <= maxdeg; ++j)
      pow[k].col(j) = pow[k].col(j - 1).cwiseProduct(Z.row(k).transpose());
  }

  Eigen::MatrixXd out(F, S);
  for (int f = 0; f < F; ++f) {
    const MultiIndex& g = features.indices[f];
    Eigen::VectorXd acc = Eigen::VectorXd::Ones(S);
    for (int k = 0; k < features.dim; ++k)
      if (g[k] > 0) acc.array() *= pow[k].col(g[k]).array();
    out.row(f) = acc.transpose();
  }
  return out;
}

Eigen::VectorXd PolynomialMap::operator()(const Eigen::VectorXd& z) const {
  return evaluate_batch(z).col(0);
}

Eigen::MatrixXd PolynomialMap::evaluate_batch(const Eigen::MatrixXd& Z) const {
  return coeffs * monomial_features(features, Z);
}

PolynomialMap fit_optimal_map(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& z_values,
                              const Eigen::VectorXd& weights, int degree) {
  const Eigen::Index S = z_values.cols();
  if (targets.cols() != S)
    throw std::invalid_argument("fit_optimal_map: target count != sample count");
  if (weights.size() != S)
    throw std::invalid_argument("fit_optimal_map: weight count != sample count");
  if (degree < 0) throw std::invalid_argument("fit_optimal_map: negative degree");

  PolynomialMap map;
  map.features = build_index_set(static_cast<int>(z_values.rows()), degree);
  const int F = map.features.size();
  if (S < F)
    throw std::invalid_argument("fit_optimal_map: fewer samples than features");

  const Eigen::VectorXd sw = weights.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd design =
      sw.asDiagonal() * monomial_features(map.features, z_values).transpose(); // S x F
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < F) {
    std::ostringstream os;
    os << "fit_optimal_map: feature design is rank deficient (rank " << qr.rank() << " of "
       << F << "); lower the map degree or enrich the design";
    throw std::runtime_error(os.str());
  }
  map.coeffs = qr.solve(sw.asDiagonal() * targets.transpose()).transpose();
  return map;
}

double map_residual(const PolynomialMap& map, const Eigen::MatrixXd& targets,
                    const Eigen::MatrixXd& z_values, const Eigen::VectorXd& weights) {
  const Eigen::MatrixXd r = targets - map.evaluate_batch(z_values);
  return (r.array().square().colwise().sum() * weights.transpose().array()).sum();
}

} // namespace gmkf
