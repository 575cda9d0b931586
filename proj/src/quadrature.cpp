#include "gmkf/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace gmkf {

void gauss_hermite_1d(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_1d: need at least one point");

  // Golub-Welsch: the recurrence He_{k+1} = x He_k - k He_{k-1} has Jacobi
  // matrix with zero diagonal and off-diagonal sqrt(k).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite_1d: Jacobi eigen-decomposition failed");

  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    weights[i] = v * v; // total measure is 1
  }

  // The exact rule is symmetric about zero; enforce that on the computed one.
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    const double x = 0.5 * (nodes[i] - nodes[j]);
    nodes[i] = x;
    nodes[j] = -x;
    const double w = 0.5 * (weights[i] + weights[j]);
    weights[i] = w;
    weights[j] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
  weights /= weights.sum();
}

QuadratureRule gauss_hermite_rule(int dim, int points_per_dim, std::size_t node_cap) {
  if (dim < 1) throw std::invalid_argument("gauss_hermite_rule: dim must be >= 1");
  const double total = std::pow(static_cast<double>(points_per_dim), dim);
  if (total > static_cast<double>(node_cap))
    throw std::invalid_argument("gauss_hermite_rule: node count exceeds the cap");

  Eigen::VectorXd x1, w1;
  gauss_hermite_1d(points_per_dim, x1, w1);

  const auto S = static_cast<Eigen::Index>(total);
  QuadratureRule rule;
  rule.dim = dim;
  rule.points_per_dim = points_per_dim;
  rule.nodes.resize(dim, S);
  rule.weights.resize(S);

  std::vector<int> idx(dim, 0);
  for (Eigen::Index s = 0; s < S; ++s) {
    double w = 1.0;
    for (int k = 0; k < dim; ++k) {
      rule.nodes(k, s) = x1[idx[k]];
      w *= w1[idx[k]];
    }
    rule.weights[s] = w;
    for (int k = dim - 1; k >= 0; --k) {
      if (++idx[k] < points_per_dim) break;
      idx[k] = 0;
    }
  }
  return rule;
}

Eigen::MatrixXd gram_matrix(const HermiteBasis& basis, const QuadratureRule& rule) {
  if (rule.dim != basis.dim())
    throw std::invalid_argument("gram_matrix: rule and basis dimension mismatch");
  const Eigen::MatrixXd psi = eval_basis(basis, rule.nodes);
  return psi.transpose() * rule.weights.asDiagonal() * psi;
}

} // namespace gmkf
