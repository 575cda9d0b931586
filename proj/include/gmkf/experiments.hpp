#pragma once

#include <vector>

#include "gmkf/ce_filter.hpp"
#include "gmkf/enkf.hpp"
#include "gmkf/models.hpp"

namespace gmkf {

/// What happens to the posterior germ between sequential updates.
///
/// Exact      — keep the growing joint (xi, eta_1, eta_2, ...) germ.  Free of
///              approximation; affordable when no quadrature over the germ is
///              needed again (direct observation models).
/// Regauss    — re-express the posterior as a fresh degree-1 Gaussian germ by
///              moment matching (mean + covariance square root).  Keeps the
///              germ dimension fixed so node-wise propagation and surrogate
///              rebuilds stay cheap; higher moments are dropped between
///              cycles.
enum class GermPolicy { Exact, Regauss };

/// How the measurement-prediction surrogate is fitted where the choice makes
/// a computational difference (the diffusion runner).  Collocation pairs a
/// tensor-degree basis with the matching tensor Gauss-Hermite design so the
/// system is square; Galerkin solves the stochastic state equation for the
/// state coefficients and observes them (valid because the patch-average
/// observation is linear in the state).
enum class SurrogateRoute { Collocation, Regression, Projection, Galerkin };

struct UpdateRecord {
  int step = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double pre_trace = 0.0;  // forecast covariance trace (before the update)
  double post_trace = 0.0; // posterior covariance trace
  Eigen::VectorXd y_obs;
  int gain_rank = 0;
};

struct SequentialResult {
  std::vector<UpdateRecord> updates;
  PceVector posterior;
  Eigen::VectorXd truth;
};

struct EnsembleSequentialResult {
  std::vector<UpdateRecord> updates;
  Ensemble posterior;
  Eigen::VectorXd truth;
};

// --- direct-observation identification -------------------------------------

struct IdentityConfig {
  int dim = 1;
  int n_updates = 10;
  double noise_std = 0.5;
  Eigen::VectorXd prior_mean; // defaults to zeros
  Eigen::VectorXd prior_std;  // defaults to ones
  GermPolicy policy = GermPolicy::Exact;
};

/// Repeated spectral updates against fresh measurements of `truth`.
SequentialResult run_identity_spkf(const IdentityConfig& cfg, const Eigen::VectorXd& truth,
                                   Rng rng);

/// Samplewise counterpart with an ensemble of the given size.
EnsembleSequentialResult run_identity_enkf(const IdentityConfig& cfg, Eigen::Index members,
                                           const Eigen::VectorXd& truth, Rng rng);

// --- scalar cubic observation ----------------------------------------------

struct CubicUpdateConfig {
  double prior_mean = 0.0;
  double prior_std = 1.0;
  double noise_std = 1.0;
  int quad_points = 16; // per germ dimension, joint rule
  int oracle_grid_halfwidth = 8;
};

struct CubicUpdateResult {
  double y_obs = 0.0;
  double lin_mean = 0.0;   // conditional-expectation map of degree 1
  double quad_mean = 0.0;  // degree 2
  double lin_residual = 0.0;
  double quad_residual = 0.0;
  double oracle_mean = 0.0;
  double oracle_variance = 0.0;
  PosteriorRv lin;
  PosteriorRv quad;
};

CubicUpdateResult run_cubic_update(const CubicUpdateConfig& cfg, double y_obs);

// --- Lorenz-84 state assimilation --------------------------------------------

struct Lorenz84Config {
  int n_windows = 10;
  double window_days = 10.0;
  double h_days = 0.05;
  double noise_std = 0.1;
  Eigen::Vector3d init_mean{1.0, 0.0, -0.75};
  double init_std = 0.2;
  double spinup_days = 100.0; // settle the truth onto the attractor first
  int degree = 2;             // state PCE total degree
  int quad_points = 4;        // per germ dimension for propagation/re-projection
  models::Lorenz84Params prm;
};

struct Lorenz84Result {
  std::vector<UpdateRecord> updates; // mean/cov of the state PCE, 3 components
  std::vector<Eigen::Vector3d> truth_path;
  PceVector posterior;
};

/// Sequential assimilation: node-wise RK4 propagation of the state PCE with
/// re-projection, then a spectral update on the fully observed state, then a
/// Gaussian re-germ (GermPolicy::Regauss is inherent here — propagation needs
/// a fixed germ dimension).
Lorenz84Result run_lorenz84(const Lorenz84Config& cfg, Rng rng);

// --- 1-D diffusion identification -------------------------------------------

struct DiffusionConfig {
  int n_cells = 60;
  int n_modes = 3;
  int n_patches = 5;
  int n_updates = 5;
  double noise_std = 1e-3;
  double prior_std = 0.5;
  int degree = 2;
  int quad_points = 4;
  SurrogateRoute route = SurrogateRoute::Projection;
};

struct DiffusionResult {
  std::vector<UpdateRecord> updates;
  std::vector<double> rmse; // parameter-space RMSE of the posterior mean, per update
  PceVector posterior;
  Eigen::VectorXd truth;
};

/// Sequential identification of the log-conductivity coefficients from patch
/// averages, one virtual experiment (distinct right-hand side) per update.
DiffusionResult run_diffusion(const DiffusionConfig& cfg, const Eigen::VectorXd& truth,
                              Rng rng);

/// The right-hand side used for update k (varied so repeated experiments add
/// information): 1, sin(pi s), cos(pi s), sin(2 pi s), cos(2 pi s), cycled.
std::function<double(double)> diffusion_rhs(int k);

} // namespace gmkf
