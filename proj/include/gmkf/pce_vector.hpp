#pragma once

#include <Eigen/Core>

#include "gmkf/hermite.hpp"
#include "gmkf/rng.hpp"

namespace gmkf {

/// A vector-valued random variable given by polynomial chaos coefficients
/// over a block of the global Gaussian germ.  `coeffs` is D x T (component
/// per row, one column per basis term); the variable depends on germ
/// components [germ_offset, germ_offset + basis.dim()).  Blocks at different
/// offsets are statistically independent by construction, which is what makes
/// cross-covariances between parameter and noise germs vanish structurally.
struct PceVector {
  HermiteBasis basis;
  int germ_offset = 0;
  Eigen::MatrixXd coeffs; // D x T

  Eigen::Index dim() const { return coeffs.rows(); }
  int germ_dim() const { return basis.dim(); }
  int germ_end() const { return germ_offset + basis.dim(); }
};

/// Throws std::invalid_argument on coefficient/basis shape mismatch.
void validate(const PceVector& v, const char* who);

/// Degree-1 (Gaussian) variable mean + A * xi over `width` germ components
/// starting at `germ_offset`; A is D x width.
PceVector gaussian_pce(const Eigen::VectorXd& mean, const Eigen::MatrixXd& A,
                       int germ_offset = 0);

/// E[v] = sum_alpha v_alpha E[psi_alpha]; only the zero index contributes.
Eigen::VectorXd mean(const PceVector& v);

/// Cross-covariance via the analytic Gram: indices are embedded into the
/// joint germ and matched exactly, so disjoint germ blocks give a zero
/// matrix without any sampling.  Both arguments must share the normalization
/// convention.
Eigen::MatrixXd covariance(const PceVector& v, const PceVector& w);
Eigen::MatrixXd covariance(const PceVector& v);

/// Evaluate at germ realizations: `germ` is G x S with G >= v.germ_end();
/// the result is D x S.
Eigen::MatrixXd evaluate(const PceVector& v, const Eigen::MatrixXd& germ);

/// Monte Carlo sample of size S (draws the needed germ block internally).
Eigen::MatrixXd sample(const PceVector& v, Eigen::Index S, Rng& rng);

/// Re-express the coefficients on a superset index set over the full joint
/// germ (germ_offset 0, `target.dim` variables).  Throws if some term of `v`
/// has no slot in `target`.
PceVector embed_on(const PceVector& v, const MultiIndexSet& target);

} // namespace gmkf
