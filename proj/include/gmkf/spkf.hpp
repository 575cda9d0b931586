#pragma once

#include "gmkf/gain.hpp"
#include "gmkf/pce_vector.hpp"

namespace gmkf {

/// Predicted measurement z = y + eps as one PCE over the joint germ.  The
/// noise block must be disjoint from (and not overlap) the germ block of y;
/// the result lives at germ offset 0 with the union of both supports.
PceVector assemble_z(const PceVector& y, const PceVector& eps);

/// Linear Bayesian update executed coefficientwise on the chaos coefficients:
/// the constant column moves by K (y_obs - mean(z)), every other column alpha
/// by -K z_alpha.  The result lives over the joint germ with the union of the
/// supports of x_f and z.  Mean and covariance of the output obey
/// mean(x_a) = mean(x_f) + K (y_obs - mean(z)) and
/// cov(x_a) = cov(x_f) - K C_xz^T exactly, by construction.
/// `gain_out`, when given, receives the gain and covariances used.
PceVector spkf_update(const PceVector& x_f, const PceVector& z,
                      const Eigen::VectorXd& y_obs, GainOperator* gain_out = nullptr,
                      double pinv_rel_tol = 1e-12);

} // namespace gmkf
