#pragma once

#include "gmkf/ce_filter.hpp"

namespace gmkf {

/// Linear germ reduction for a posterior fluctuation: a map zeta = A [xi;eta]
/// onto the few directions of the joint germ the fluctuation actually
/// depends on, whitened in the conditional (given the measurement) second
/// moment — E[zeta zeta^T | y_obs] is the identity by construction.
struct GermReduction {
  Eigen::MatrixXd A;               // rank x G
  Eigen::VectorXd singular_values; // of the whitened cross-moment block
  int rank = 0;
  Eigen::MatrixXd cond_sec_moment; // estimated E[germ germ^T | y_obs], G x G
};

/// Build the reduction from conditional moment estimates: the cross block
/// E[fluct (germ)^T | y_obs] and the germ second moment E[germ germ^T | y_obs]
/// are both fitted as polynomial maps in z of `map_degree` and evaluated at
/// the measurement; the reduction is the SVD of the cross block expressed in
/// the whitened germ coordinates (Moore-Penrose where the conditional second
/// moment is singular).  The zeta count is the numerical rank of that block,
/// at most the fluctuation dimension.
GermReduction reduce_germ(const PceVector& fluct, const PceVector& z,
                          const Eigen::VectorXd& y_obs, int map_degree,
                          const QuadratureRule& joint_rule, double rank_rel_tol = 1e-8,
                          double pinv_rel_tol = 1e-12);

/// Galerkin re-expansion of the fluctuation in Hermite functions of zeta.
struct ReexpansionResult {
  PceVector posterior;        // over the fresh zeta germ; mean in the constant column
  Eigen::MatrixXd cond_gram;  // Phi_ab = E[phi_a(zeta) phi_b(zeta) | y_obs], J x J
  Eigen::MatrixXd cond_cov;   // sum_ab Phi_ab x^a (x^b)^T of the final fluctuation
  double gram_condition = 0.0;
};

/// Coefficients solve Phi x^(.) = E[fluct phi_a(zeta) | y_obs] with the
/// conditional Gram Phi (condition number above 1e10 is an error).  When
/// `match_cov` is given, the fluctuation coefficients are rescaled by the
/// symmetric square-root transform so the conditional covariance equals it.
/// The returned PCE treats zeta as a fresh standard Gaussian germ (offset 0),
/// which is exactly how it should be sampled.
ReexpansionResult reexpand_posterior(const PceVector& fluct, const Eigen::VectorXd& mean,
                                     const GermReduction& red, int zeta_degree,
                                     const PceVector& z, const Eigen::VectorXd& y_obs,
                                     int map_degree, const QuadratureRule& joint_rule,
                                     const Eigen::MatrixXd* match_cov = nullptr);

} // namespace gmkf
