#include "gmkf/enkf.hpp"

#include <stdexcept>

namespace gmkf {

Ensemble enkf_update(const Ensemble& x_f, const Ensemble& z, const Eigen::VectorXd& y_obs,
                     GainOperator* gain_out, double pinv_rel_tol) {
  if (x_f.size() != z.size())
    throw std::invalid_argument("enkf_update: ensembles are not member-aligned");
  if (y_obs.size() != z.dim())
    throw std::invalid_argument("enkf_update: measurement dimension != z dimension");

  GainOperator gain =
      kalman_gain(ensemble_covariance(x_f, z), ensemble_covariance(z), pinv_rel_tol);

  Ensemble xa;
  xa.germ_samples = x_f.germ_samples;
  xa.members = x_f.members + gain.K * ((-z.members).colwise() + y_obs);
  if (gain_out) *gain_out = std::move(gain);
  return xa;
}

} // namespace gmkf
