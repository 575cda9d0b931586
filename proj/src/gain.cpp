#include "gmkf/gain.hpp"

#include <stdexcept>

#include "gmkf/psd.hpp"

namespace gmkf {

GainOperator kalman_gain(const Eigen::MatrixXd& C_xz, const Eigen::MatrixXd& C_z,
                         double rel_tol) {
  if (C_xz.cols() != C_z.rows())
    throw std::invalid_argument("kalman_gain: covariance shapes are inconsistent");
  require_psd(C_z, "kalman_gain");

  GainOperator g;
  g.C_xz = C_xz;
  g.C_z = 0.5 * (C_z + C_z.transpose());
  g.K = C_xz * pinv_psd(g.C_z, rel_tol, &g.pinv_rank);
  return g;
}

Eigen::MatrixXd posterior_covariance(const Eigen::MatrixXd& C_xf, const GainOperator& gain) {
  return C_xf - gain.K * gain.C_xz.transpose();
}

} // namespace gmkf
