#pragma once

#include <optional>

#include "gmkf/collocation.hpp"
#include "gmkf/polynomial_map.hpp"
#include "gmkf/spkf.hpp"

namespace gmkf {

/// Posterior random variable produced by a conditional-expectation update:
/// deterministic mean part phi(y_obs) plus the zero-mean-by-construction
/// fluctuation x_f - phi(z) re-expressed over the joint germ.
struct PosteriorRv {
  Eigen::VectorXd mean;           // phi at the actual measurement
  PceVector fluctuation;          // x_f - phi(z), a PCE over the joint germ
  PolynomialMap map;              // the fitted map phi
  std::optional<Eigen::MatrixXd> corrected_cov;
};

/// Bayesian update through a polynomial conditional-expectation map of the
/// given total degree (degree 1 reproduces the linear update of spkf_update;
/// degree >= 2 is the higher-order variant).  The map is fitted by weighted
/// least squares at the joint-germ quadrature nodes; the fluctuation is
/// re-projected onto a total-degree basis over the joint germ
/// (fluct_degree < 0 picks max(x_f degree, map degree * z degree), which is
/// exact).  The rule must span the joint germ and be exact enough for the
/// polynomials involved.
PosteriorRv ce_filter_update(const PceVector& x_f, const PceVector& z,
                             const Eigen::VectorXd& y_obs, int map_degree,
                             const QuadratureRule& joint_rule, int fluct_degree = -1);

/// Conditional posterior covariance estimate
/// E[x (x)^T | y_obs] - mean mean^T, both conditional moments through
/// optimal maps of the same degree.  Tiny negative eigenvalues (estimation
/// noise) are clipped to zero; eigenvalues below -1e-6 * trace are an error.
Eigen::MatrixXd corrected_covariance(const PceVector& x_f, const PceVector& z,
                                     const Eigen::VectorXd& y_obs, int map_degree,
                                     const QuadratureRule& joint_rule);

/// Rescale a fluctuation so its coefficient covariance equals `target`:
/// applies the symmetric square-root transform target^{1/2} C^{-1/2}
/// (Moore-Penrose on the null space) to every coefficient column.
PceVector covariance_match(PceVector fluct, const Eigen::MatrixXd& target,
                           double rel_tol = 1e-12);

} // namespace gmkf
