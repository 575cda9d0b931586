#pragma once

#include "gmkf/ensemble.hpp"
#include "gmkf/gain.hpp"

namespace gmkf {

/// Samplewise linear Bayesian update: every member moves by
/// K_hat (y_obs - z_s), with K_hat built from the unbiased ensemble
/// covariances (the perturbed-observation scheme — z_s must already contain
/// the per-member noise draw).  Forecast and predicted-measurement ensembles
/// must be member-aligned and of equal size S >= 2.
Ensemble enkf_update(const Ensemble& x_f, const Ensemble& z, const Eigen::VectorXd& y_obs,
                     GainOperator* gain_out = nullptr, double pinv_rel_tol = 1e-12);

} // namespace gmkf
