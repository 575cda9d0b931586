#pragma once

#include <Eigen/Core>

#include "gmkf/hermite.hpp"

namespace gmkf {

/// Tensorized Gauss-Hermite rule for the standard Gaussian product measure.
/// `weights` are the probability weights (positive, summing to one);
/// integrating f means sum_s weights[s] * f(nodes.col(s)).
struct QuadratureRule {
  int dim = 1;
  int points_per_dim = 1;
  Eigen::MatrixXd nodes;   // dim x S
  Eigen::VectorXd weights; // S

  Eigen::Index size() const { return weights.size(); }
};

/// Univariate Gauss-Hermite nodes/weights (probabilists' weight function),
/// synthesized from the eigen-decomposition of the Jacobi matrix of the
/// three-term recurrence.  An n-point rule is exact up to polynomial degree
/// 2n - 1.
void gauss_hermite_1d(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Full tensor rule over `dim` variables; throws if n^dim exceeds `node_cap`.
QuadratureRule gauss_hermite_rule(int dim, int points_per_dim,
                                  std::size_t node_cap = 1'000'000);

/// Gram matrix of the basis under the rule: Psi^T diag(w) Psi.  Equals the
/// identity (orthonormal basis) or diag(alpha!) (monic) whenever the rule is
/// exact for all pairwise products.
Eigen::MatrixXd gram_matrix(const HermiteBasis& basis, const QuadratureRule& rule);

} // namespace gmkf
