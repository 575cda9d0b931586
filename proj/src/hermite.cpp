#include "gmkf/hermite.hpp"

#include <cmath>
#include <stdexcept>

#include "gmkf/kernels.hpp"

namespace gmkf {

HermiteBasis hermite_basis(int dim, int degree, bool normalized) {
  return HermiteBasis{build_index_set(dim, degree, Truncation::TotalDegree), normalized};
}

double hermite_value(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_value: negative degree");
  double hm = 1.0;
  if (n == 0) return hm;
  double hc = x;
  for (int j = 1; j < n; ++j) {
    const double hn = x * hc - static_cast<double>(j) * hm;
    hm = hc;
    hc = hn;
  }
  return hc;
}

double basis_norm_sq(const MultiIndex& alpha) {
  double f = 1.0;
  for (int e : alpha)
    for (int j = 2; j <= e; ++j) f *= j;
  return f;
}

Eigen::MatrixXd eval_basis(const HermiteBasis& basis, const Eigen::MatrixXd& points) {
  const int dim = basis.dim();
  const int T = basis.size();
  if (points.rows() != dim)
    throw std::invalid_argument("eval_basis: point dimension does not match the basis");
  const Eigen::Index S = points.cols();

  // Per-dimension univariate tables He_0..He_p (batched recurrence), scaled by
  // 1/sqrt(j!) column-wise when the basis is normalized; the multivariate
  // terms are then plain column products.
  int maxdeg = 0;
  for (const auto& alpha : basis.set.indices)
    for (int e : alpha) maxdeg = std::max(maxdeg, e);

  std::vector<Eigen::MatrixXd> tables(dim);
  Eigen::VectorXd row(S);
  for (int k = 0; k < dim; ++k) {
    tables[k].resize(S, maxdeg + 1);
    row = points.row(k);
    kernels::hermite_batch(row.data(), static_cast<std::size_t>(S), maxdeg,
                           tables[k].data());
    if (basis.normalized) {
      double fact = 1.0;
      for (int j = 2; j <= maxdeg; ++j) {
        fact *= j;
        tables[k].col(j) /= std::sqrt(fact);
      }
    }
  }

  Eigen::MatrixXd psi(S, T);
  for (int t = 0; t < T; ++t) {
    const MultiIndex& alpha = basis.set.indices[t];
    psi.col(t).setOnes();
    for (int k = 0; k < dim; ++k)
      if (alpha[k] > 0) psi.col(t).array() *= tables[k].col(alpha[k]).array();
  }
  return psi;
}

double pair_expectation(const MultiIndex& alpha, const MultiIndex& beta, bool normalized) {
  if (alpha != beta) return 0.0;
  return normalized ? 1.0 : basis_norm_sq(alpha);
}

} // namespace gmkf
