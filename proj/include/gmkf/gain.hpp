#pragma once

#include <Eigen/Core>

namespace gmkf {

/// The optimal linear-update operator K = C_xz C_z^+ together with the
/// covariances it was built from.  `pinv_rank` is the rank retained by the
/// pseudo-inverse (eigenvalues above rel_tol * lambda_max).
struct GainOperator {
  Eigen::MatrixXd K;    // D x I
  Eigen::MatrixXd C_xz; // D x I
  Eigen::MatrixXd C_z;  // I x I
  int pinv_rank = 0;
};

/// Build the gain from the forecast/observation covariances.  C_z must be
/// symmetric positive semi-definite (within tolerance); singular directions
/// are handled by the Moore-Penrose pseudo-inverse, so an entirely
/// uninformative observation (C_z = 0, C_xz = 0) yields K = 0 and the update
/// below degenerates to the identity.
GainOperator kalman_gain(const Eigen::MatrixXd& C_xz, const Eigen::MatrixXd& C_z,
                         double rel_tol = 1e-12);

/// Posterior covariance of the linear update: C_xf - K C_xz^T.
Eigen::MatrixXd posterior_covariance(const Eigen::MatrixXd& C_xf, const GainOperator& gain);

} // namespace gmkf
