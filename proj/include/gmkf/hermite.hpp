#pragma once

#include <Eigen/Core>

#include "gmkf/multi_index.hpp"

namespace gmkf {

/// Multivariate probabilists' Hermite basis over an index set.  With
/// `normalized` set, each term is divided by sqrt(alpha!) so the basis is
/// orthonormal under the standard Gaussian product measure; otherwise the
/// polynomials are monic and E[psi_alpha psi_beta] = delta_ab * alpha!.
struct HermiteBasis {
  MultiIndexSet set;
  bool normalized = true;

  int dim() const { return set.dim; }
  int size() const { return set.size(); }
};

/// Convenience constructor for the total-degree basis.
HermiteBasis hermite_basis(int dim, int degree, bool normalized = true);

/// Monic probabilists' Hermite polynomial He_n(x) via the three-term
/// recurrence He_{n+1} = x He_n - n He_{n-1}.
double hermite_value(int n, double x);

/// alpha! = prod_k alpha_k!, the squared monic norm of psi_alpha.
double basis_norm_sq(const MultiIndex& alpha);

/// Evaluate all basis terms at the given points.  `points` is dim x S (one
/// point per column); the result is S x T with row s holding psi_alpha(xi_s)
/// for every alpha of the set, in set order.
Eigen::MatrixXd eval_basis(const HermiteBasis& basis, const Eigen::MatrixXd& points);

/// E[psi_alpha psi_beta] for two (embedded) indices of the same basis family:
/// zero unless alpha == beta, else alpha! (monic) or 1 (normalized).
double pair_expectation(const MultiIndex& alpha, const MultiIndex& beta, bool normalized);

} // namespace gmkf
