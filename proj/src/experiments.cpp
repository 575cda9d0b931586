#include "gmkf/experiments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gmkf/galerkin.hpp"
#include "gmkf/psd.hpp"
#include "gmkf/spkf.hpp"

namespace gmkf {

namespace {

Eigen::VectorXd or_default(const Eigen::VectorXd& v, int dim, double fill) {
  if (v.size() == 0) return Eigen::VectorXd::Constant(dim, fill);
  if (v.size() != dim)
    throw std::invalid_argument("experiment config: prior vector dimension mismatch");
  return v;
}

/// Moment-matched Gaussian re-expression over a fresh germ.
PceVector regauss(const PceVector& v) {
  return gaussian_pce(mean(v), sqrt_psd(covariance(v)));
}

UpdateRecord record_of(int step, const PceVector& post, double pre_trace,
                       const Eigen::VectorXd& y_obs, int gain_rank) {
  UpdateRecord r;
  r.step = step;
  r.mean = mean(post);
  r.cov = covariance(post);
  r.pre_trace = pre_trace;
  r.post_trace = r.cov.trace();
  r.y_obs = y_obs;
  r.gain_rank = gain_rank;
  return r;
}

} // namespace

SequentialResult run_identity_spkf(const IdentityConfig& cfg, const Eigen::VectorXd& truth,
                                   Rng rng) {
  const int D = cfg.dim;
  if (truth.size() != D)
    throw std::invalid_argument("run_identity_spkf: truth dimension mismatch");
  const Eigen::VectorXd pm = or_default(cfg.prior_mean, D, 0.0);
  const Eigen::VectorXd ps = or_default(cfg.prior_std, D, 1.0);

  SequentialResult out;
  out.truth = truth;
  PceVector x = gaussian_pce(pm, Eigen::MatrixXd(ps.asDiagonal()));
  Rng noise = rng.fork(1);

  for (int k = 0; k < cfg.n_updates; ++k) {
    // Direct observation: the predicted measurement is the parameter itself
    // plus fresh noise on its own germ block.
    const PceVector eps = gaussian_pce(
        Eigen::VectorXd::Zero(D),
        Eigen::MatrixXd(Eigen::VectorXd::Constant(D, cfg.noise_std).asDiagonal()),
        x.germ_end());
    const PceVector z = assemble_z(x, eps);
    const Eigen::VectorXd y_obs = truth + cfg.noise_std * noise.normal_vector(D);

    const double pre = covariance(x).trace();
    GainOperator gain;
    PceVector xa = spkf_update(x, z, y_obs, &gain);
    out.updates.push_back(record_of(k + 1, xa, pre, y_obs, gain.pinv_rank));

    x = (cfg.policy == GermPolicy::Exact) ? std::move(xa) : regauss(xa);
  }
  out.posterior = std::move(x);
  return out;
}

EnsembleSequentialResult run_identity_enkf(const IdentityConfig& cfg, Eigen::Index members,
                                           const Eigen::VectorXd& truth, Rng rng) {
  const int D = cfg.dim;
  if (truth.size() != D)
    throw std::invalid_argument("run_identity_enkf: truth dimension mismatch");
  const Eigen::VectorXd pm = or_default(cfg.prior_mean, D, 0.0);
  const Eigen::VectorXd ps = or_default(cfg.prior_std, D, 1.0);

  EnsembleSequentialResult out;
  out.truth = truth;
  Rng draws = rng.fork(0);
  Rng noise = rng.fork(1);

  Ensemble x;
  x.members = (pm + Eigen::VectorXd::Zero(D)).replicate(1, members);
  x.members += ps.asDiagonal() * draws.normal_matrix(D, members);

  for (int k = 0; k < cfg.n_updates; ++k) {
    Ensemble z;
    z.members = x.members + cfg.noise_std * draws.normal_matrix(D, members);
    const Eigen::VectorXd y_obs = truth + cfg.noise_std * noise.normal_vector(D);

    const double pre = ensemble_covariance(x).trace();
    GainOperator gain;
    x = enkf_update(x, z, y_obs, &gain);

    UpdateRecord r;
    r.step = k + 1;
    r.mean = ensemble_mean(x);
    r.cov = ensemble_covariance(x);
    r.pre_trace = pre;
    r.post_trace = r.cov.trace();
    r.y_obs = y_obs;
    r.gain_rank = gain.pinv_rank;
    out.updates.push_back(std::move(r));
  }
  out.posterior = std::move(x);
  return out;
}

CubicUpdateResult run_cubic_update(const CubicUpdateConfig& cfg, double y_obs) {
  if (!(cfg.prior_std > 0.0) || !(cfg.noise_std > 0.0))
    throw std::invalid_argument("run_cubic_update: spreads must be positive");

  // Prior x = m + s xi over germ component 0; predicted measurement
  // z = x^3 + noise on germ component 1, expanded over the joint germ.
  const PceVector x = gaussian_pce(Eigen::VectorXd::Constant(1, cfg.prior_mean),
                                   Eigen::MatrixXd::Constant(1, 1, cfg.prior_std));
  const ForwardModel cubic = models::cubic_model();
  const GermMap ymap = observation_map(cubic, x);
  const PceVector y = fit_projection(ymap, gauss_hermite_rule(1, cfg.quad_points),
                                     hermite_basis(1, 3));
  const PceVector eps = gaussian_pce(Eigen::VectorXd::Zero(1),
                                     Eigen::MatrixXd::Constant(1, 1, cfg.noise_std), 1);
  const PceVector z = assemble_z(y, eps);

  const QuadratureRule joint = gauss_hermite_rule(2, cfg.quad_points);
  const Eigen::VectorXd yv = Eigen::VectorXd::Constant(1, y_obs);

  CubicUpdateResult res;
  res.y_obs = y_obs;
  res.lin = ce_filter_update(x, z, yv, 1, joint);
  res.quad = ce_filter_update(x, z, yv, 2, joint);
  res.lin_mean = res.lin.mean[0];
  res.quad_mean = res.quad.mean[0];

  // MMSE residuals of the two maps under the same joint rule.
  const Eigen::MatrixXd xs = evaluate(x, joint.nodes);
  const Eigen::MatrixXd zs = evaluate(z, joint.nodes);
  res.lin_residual = map_residual(res.lin.map, xs, zs, joint.weights);
  res.quad_residual = map_residual(res.quad.map, xs, zs, joint.weights);

  // Deterministic posterior oracle for the scalar problem.
  const double pm = cfg.prior_mean, pstd = cfg.prior_std;
  auto prior_pdf = [pm, pstd](double p) {
    const double t = (p - pm) / pstd;
    return std::exp(-0.5 * t * t) / (pstd * std::sqrt(2.0 * std::numbers::pi));
  };
  const double half = cfg.oracle_grid_halfwidth * cfg.prior_std;
  const models::BayesOracle1d oracle = models::bayes_oracle_1d(
      prior_pdf, [](double p) { return p * p * p; }, y_obs, cfg.noise_std, pm - half,
      pm + half);
  res.oracle_mean = oracle.mean;
  res.oracle_variance = oracle.variance;
  return res;
}

Lorenz84Result run_lorenz84(const Lorenz84Config& cfg, Rng rng) {
  Rng draws = rng.fork(0);
  Rng noise = rng.fork(1);

  // Truth starts near the initial belief and settles onto the attractor
  // during spin-up; the belief is centred on the spun-up truth.
  Eigen::Vector3d truth = cfg.init_mean + cfg.init_std * Eigen::Vector3d(draws.normal_vector(3));
  truth = models::lorenz84_integrate(truth, cfg.spinup_days, cfg.h_days, cfg.prm);

  // The belief starts off the truth by one prior standard deviation draw.
  const Eigen::Vector3d belief_mean =
      truth + cfg.init_std * Eigen::Vector3d(draws.normal_vector(3));
  PceVector x = gaussian_pce(belief_mean, cfg.init_std * Eigen::MatrixXd::Identity(3, 3));
  const HermiteBasis state_basis = hermite_basis(3, cfg.degree);
  const QuadratureRule rule = gauss_hermite_rule(3, cfg.quad_points);

  Lorenz84Result out;
  out.truth_path.push_back(truth);

  for (int w = 0; w < cfg.n_windows; ++w) {
    truth = models::lorenz84_integrate(truth, cfg.window_days, cfg.h_days, cfg.prm);
    out.truth_path.push_back(truth);

    // Node-wise propagation of the state PCE, then re-projection.
    const Eigen::MatrixXd states = evaluate(x, rule.nodes);
    Eigen::MatrixXd propagated(3, rule.size());
    for (Eigen::Index s = 0; s < rule.size(); ++s)
      propagated.col(s) = models::lorenz84_integrate(states.col(s), cfg.window_days,
                                                     cfg.h_days, cfg.prm);
    const PceVector forecast = project_values(propagated, rule, state_basis);
    const double pre = covariance(forecast).trace();

    const Eigen::VectorXd y_obs = truth + cfg.noise_std * noise.normal_vector(3);
    const PceVector eps = gaussian_pce(Eigen::VectorXd::Zero(3),
                                       cfg.noise_std * Eigen::MatrixXd::Identity(3, 3),
                                       forecast.germ_end());
    const PceVector z = assemble_z(forecast, eps);

    GainOperator gain;
    const PceVector xa = spkf_update(forecast, z, y_obs, &gain);
    out.updates.push_back(record_of(w + 1, xa, pre, y_obs, gain.pinv_rank));

    // Fixed germ dimension for the next propagation (Gaussian re-germ).
    x = gaussian_pce(mean(xa), sqrt_psd(covariance(xa)));
  }
  out.posterior = std::move(x);
  return out;
}

std::function<double(double)> diffusion_rhs(int k) {
  using std::numbers::pi;
  switch (k % 5) {
    case 0: return [](double) { return 1.0; };
    case 1: return [](double s) { return std::sin(pi * s); };
    case 2: return [](double s) { return std::cos(pi * s); };
    case 3: return [](double s) { return std::sin(2.0 * pi * s); };
    default: return [](double s) { return std::cos(2.0 * pi * s); };
  }
}

DiffusionResult run_diffusion(const DiffusionConfig& cfg, const Eigen::VectorXd& truth,
                              Rng rng) {
  if (truth.size() != cfg.n_modes)
    throw std::invalid_argument("run_diffusion: truth dimension mismatch");
  Rng noise = rng.fork(1);

  DiffusionResult out;
  out.truth = truth;
  PceVector x = gaussian_pce(Eigen::VectorXd::Zero(cfg.n_modes),
                             cfg.prior_std *
                                 Eigen::MatrixXd::Identity(cfg.n_modes, cfg.n_modes));
  const HermiteBasis ybasis = hermite_basis(cfg.n_modes, cfg.degree);
  const QuadratureRule rule = gauss_hermite_rule(cfg.n_modes, cfg.quad_points);

  for (int k = 0; k < cfg.n_updates; ++k) {
    models::Diffusion1dConfig mc;
    mc.n_cells = cfg.n_cells;
    mc.n_modes = cfg.n_modes;
    mc.n_patches = cfg.n_patches;
    mc.rhs = diffusion_rhs(k);
    const ForwardModel model = models::diffusion1d_model(mc);

    // Surrogate of the patch observations over the current parameter germ.
    PceVector y;
    switch (cfg.route) {
      case SurrogateRoute::Projection:
        y = fit_projection(observation_map(model, x), rule, ybasis);
        break;
      case SurrogateRoute::Regression:
        y = fit_regression(observation_map(model, x), ybasis, rule.nodes, &rule.weights);
        break;
      case SurrogateRoute::Collocation: {
        // Square system: tensor-degree basis against the matching tensor rule.
        const HermiteBasis tensor{
            build_index_set(cfg.n_modes, cfg.degree, Truncation::TensorDegree), true};
        const QuadratureRule crule = gauss_hermite_rule(cfg.n_modes, cfg.degree + 1);
        y = fit_interpolation(observation_map(model, x), tensor, crule.nodes);
        break;
      }
      case SurrogateRoute::Galerkin: {
        const HermiteBasis state_basis = ybasis; // same truncation for the state
        const PceVector u =
            solve_galerkin(model, x, ParameterTransform::identity(), rule, state_basis);
        // The patch-average observation is linear in the state, so it acts
        // coefficient by coefficient.
        y.basis = u.basis;
        y.germ_offset = u.germ_offset;
        y.coeffs.resize(cfg.n_patches, u.coeffs.cols());
        const Eigen::VectorXd p0 = Eigen::VectorXd::Zero(cfg.n_modes);
        for (Eigen::Index t = 0; t < u.coeffs.cols(); ++t)
          y.coeffs.col(t) = model.observe(p0, u.coeffs.col(t));
        break;
      }
    }
    const Eigen::VectorXd clean = model.observe(truth, model.solve(truth));
    const Eigen::VectorXd y_obs = clean + cfg.noise_std * noise.normal_vector(cfg.n_patches);

    const PceVector eps = gaussian_pce(
        Eigen::VectorXd::Zero(cfg.n_patches),
        cfg.noise_std * Eigen::MatrixXd::Identity(cfg.n_patches, cfg.n_patches),
        y.germ_end());
    const PceVector z = assemble_z(y, eps);

    // The parameter keeps its own germ block; z spans the joint germ.
    const double pre = covariance(x).trace();
    GainOperator gain;
    const PceVector xa = spkf_update(x, z, y_obs, &gain);
    out.updates.push_back(record_of(k + 1, xa, pre, y_obs, gain.pinv_rank));
    out.rmse.push_back(std::sqrt((mean(xa) - truth).squaredNorm() /
                                 static_cast<double>(cfg.n_modes)));

    x = gaussian_pce(mean(xa), sqrt_psd(covariance(xa)));
  }
  out.posterior = std::move(x);
  return out;
}

} // namespace gmkf
