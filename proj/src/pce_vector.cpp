#include "gmkf/pce_vector.hpp"

#include <stdexcept>

namespace gmkf {

void validate(const PceVector& v, const char* who) {
  if (v.coeffs.cols() != v.basis.size())
    throw std::invalid_argument(std::string(who) + ": coefficient columns != basis size");
  if (v.germ_offset < 0)
    throw std::invalid_argument(std::string(who) + ": negative germ offset");
}

PceVector gaussian_pce(const Eigen::VectorXd& mean, const Eigen::MatrixXd& A,
                       int germ_offset) {
  if (A.rows() != mean.size())
    throw std::invalid_argument("gaussian_pce: mean/linear-term shape mismatch");
  const int width = static_cast<int>(A.cols());
  PceVector v;
  v.basis = hermite_basis(width, 1);
  v.germ_offset = germ_offset;
  v.coeffs.resize(mean.size(), v.basis.size());
  v.coeffs.col(0) = mean;
  // Terms of degree one follow the constant in graded-lex order: the unit
  // index for variable k sits at column 1 + k.
  for (int k = 0; k < width; ++k) v.coeffs.col(1 + k) = A.col(k);
  return v;
}

Eigen::VectorXd mean(const PceVector& v) {
  validate(v, "mean");
  for (int t = 0; t < v.basis.size(); ++t)
    if (total_degree(v.basis.set.indices[t]) == 0) return v.coeffs.col(t);
  return Eigen::VectorXd::Zero(v.dim());
}

Eigen::MatrixXd covariance(const PceVector& v, const PceVector& w) {
  validate(v, "covariance");
  validate(w, "covariance");
  if (v.basis.normalized != w.basis.normalized)
    throw std::invalid_argument("covariance: mixed basis normalization conventions");

  const int total = std::max(v.germ_end(), w.germ_end());

  // Index-position table for w over the joint germ.
  std::unordered_map<MultiIndex, int, MultiIndexHash> wpos;
  wpos.reserve(w.basis.set.indices.size());
  for (int t = 0; t < w.basis.size(); ++t)
    wpos.emplace(embed_index(w.basis.set.indices[t], w.germ_offset, total), t);

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(v.dim(), w.dim());
  for (int t = 0; t < v.basis.size(); ++t) {
    const MultiIndex& alpha = v.basis.set.indices[t];
    if (total_degree(alpha) == 0) continue; // the mean term never contributes
    const auto it = wpos.find(embed_index(alpha, v.germ_offset, total));
    if (it == wpos.end()) continue;
    const double g = v.basis.normalized ? 1.0 : basis_norm_sq(alpha);
    C.noalias() += g * v.coeffs.col(t) * w.coeffs.col(it->second).transpose();
  }
  return C;
}

Eigen::MatrixXd covariance(const PceVector& v) { return covariance(v, v); }

Eigen::MatrixXd evaluate(const PceVector& v, const Eigen::MatrixXd& germ) {
  validate(v, "evaluate");
  if (germ.rows() < v.germ_end())
    throw std::invalid_argument("evaluate: germ realization has too few components");
  const Eigen::MatrixXd psi =
      eval_basis(v.basis, germ.middleRows(v.germ_offset, v.germ_dim()));
  return v.coeffs * psi.transpose();
}

Eigen::MatrixXd sample(const PceVector& v, Eigen::Index S, Rng& rng) {
  validate(v, "sample");
  const Eigen::MatrixXd germ = rng.normal_matrix(v.germ_end(), S);
  return evaluate(v, germ);
}

PceVector embed_on(const PceVector& v, const MultiIndexSet& target) {
  validate(v, "embed_on");
  if (target.dim < v.germ_end())
    throw std::invalid_argument("embed_on: target germ smaller than the source block");
  const auto pos = index_positions(target);

  PceVector out;
  out.basis = HermiteBasis{target, v.basis.normalized};
  out.germ_offset = 0;
  out.coeffs = Eigen::MatrixXd::Zero(v.dim(), target.size());
  for (int t = 0; t < v.basis.size(); ++t) {
    const auto it = pos.find(embed_index(v.basis.set.indices[t], v.germ_offset, target.dim));
    if (it == pos.end())
      throw std::invalid_argument("embed_on: target set misses a source term");
    out.coeffs.col(it->second) = v.coeffs.col(t);
  }
  return out;
}

} // namespace gmkf
