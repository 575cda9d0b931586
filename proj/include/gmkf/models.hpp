#pragma once

#include <functional>

#include "gmkf/forward_model.hpp"

namespace gmkf::models {

/// Direct observation of the parameter itself: observe(p) = p.  The
/// work-horse for identification studies where the posterior is known.
ForwardModel identity_model(int dim);

/// Scalar cubic observation observe(p) = p^3 — strongly nonlinear, so linear
/// and higher-order updates genuinely differ.
ForwardModel cubic_model();

/// Three-variable chaotic circulation model
///   x' = -y^2 - z^2 - a x + a F
///   y' = x y - b x z - y + G
///   z' = b x y + x z - z
/// with the classic constants a = 1/4, b = 4, F = 8, G = 1.  The model time
/// unit corresponds to five days; the public API works in days.
struct Lorenz84Params {
  double a = 0.25;
  double b = 4.0;
  double F = 8.0;
  double G = 1.0;
};

Eigen::Vector3d lorenz84_rhs(const Eigen::Vector3d& s, const Lorenz84Params& prm = {});

/// One classical RK4 step of size h_days (in days).
Eigen::Vector3d lorenz84_step(const Eigen::Vector3d& s, double h_days,
                              const Lorenz84Params& prm = {});

/// Integrate over t_days with fixed step h_days (last step shortened to hit
/// the end time exactly).
Eigen::Vector3d lorenz84_integrate(Eigen::Vector3d s, double t_days, double h_days,
                                   const Lorenz84Params& prm = {});

/// Stationary 1-D diffusion -(kappa u')' = f on (0,1), u(0) = u(1) = 0, with
/// log kappa(s) = sum_m p_m phi_m(s) over the first `n_modes` shifted
/// Legendre polynomials.  Discretized by conservative central differences on
/// n_cells uniform cells; observed through averages of u over n_patches
/// equal patches (n_patches must divide n_cells).  The parameter vector of
/// the ForwardModel is the log-conductivity coefficient vector p.
struct Diffusion1dConfig {
  int n_cells = 60;
  int n_modes = 3;
  int n_patches = 5;
  std::function<double(double)> rhs = [](double) { return 1.0; };
};

ForwardModel diffusion1d_model(const Diffusion1dConfig& cfg = {});

/// log kappa basis functions phi_m (shifted Legendre on [0,1]).
double diffusion1d_mode(int m, double s);

/// Deterministic 1-D Bayes oracle: posterior density
/// pi(p | y) proportional to prior_pdf(p) * N(y; observe(p), noise_std^2),
/// with normalization, mean, and variance computed by adaptive quadrature
/// (Gauss-Kronrod 7/15) to relative accuracy `rel_tol`.
struct BayesOracle1d {
  double norm_const = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

BayesOracle1d bayes_oracle_1d(const std::function<double(double)>& prior_pdf,
                              const std::function<double(double)>& observe, double y_obs,
                              double noise_std, double lo, double hi,
                              double rel_tol = 1e-10);

/// Normalized posterior density values on a grid (same inputs).
Eigen::VectorXd bayes_oracle_pdf(const std::function<double(double)>& prior_pdf,
                                 const std::function<double(double)>& observe, double y_obs,
                                 double noise_std, double lo, double hi,
                                 const Eigen::VectorXd& grid, double rel_tol = 1e-10);

/// Adaptive Gauss-Kronrod 7/15 integration (exposed for oracle checks).
double integrate_gk(const std::function<double(double)>& f, double lo, double hi,
                    double rel_tol = 1e-10, int max_depth = 40);

} // namespace gmkf::models
