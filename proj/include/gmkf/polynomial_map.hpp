#pragma once

#include <Eigen/Core>

#include "gmkf/multi_index.hpp"

namespace gmkf {

/// Polynomial approximation of a conditional expectation: a map
/// phi(z) = sum_gamma c_gamma z^gamma over total-degree monomial features
/// (intercept included), fitted by weighted least squares so that
/// phi(z) ~ E[target | z].  Evaluating the fitted map at the actual
/// measurement gives the conditional-expectation estimate.
struct PolynomialMap {
  MultiIndexSet features;  // monomial exponents over the observation
  Eigen::MatrixXd coeffs;  // M x F

  Eigen::Index input_dim() const { return features.dim; }
  Eigen::Index output_dim() const { return coeffs.rows(); }

  Eigen::VectorXd operator()(const Eigen::VectorXd& z) const;
  Eigen::MatrixXd evaluate_batch(const Eigen::MatrixXd& Z) const; // in I x S -> M x S
};

/// Monomial feature matrix: F x S with row gamma holding prod_k z_k^gamma_k.
Eigen::MatrixXd monomial_features(const MultiIndexSet& features, const Eigen::MatrixXd& Z);

/// Weighted least-squares fit of targets (M x S) against total-degree
/// monomials of z_values (I x S) up to `degree`, weights w_s >= 0 summing to
/// anything positive.  Uses the QR of the square-root-weighted design; a rank
/// deficient design is an error.
PolynomialMap fit_optimal_map(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& z_values,
                              const Eigen::VectorXd& weights, int degree);

/// Residual of the fit under the same weights: sum_s w_s |t_s - phi(z_s)|^2.
/// This is the (squared) distance minimized by the conditional expectation,
/// so richer feature sets can only decrease it.
double map_residual(const PolynomialMap& map, const Eigen::MatrixXd& targets,
                    const Eigen::MatrixXd& z_values, const Eigen::VectorXd& weights);

} // namespace gmkf
