#include "gmkf/posterior_reconstruction.hpp"

#include <Eigen/Dense>

#include <stdexcept>

#include "gmkf/psd.hpp"

namespace gmkf {

namespace {

// Fit targets as a polynomial map in z over the rule and evaluate at y_obs.
Eigen::VectorXd conditional_estimate(const Eigen::MatrixXd& targets,
                                     const Eigen::MatrixXd& zs, const Eigen::VectorXd& w,
                                     int degree, const Eigen::VectorXd& y_obs) {
  return fit_optimal_map(targets, zs, w, degree)(y_obs);
}

} // namespace

GermReduction reduce_germ(const PceVector& fluct, const PceVector& z,
                          const Eigen::VectorXd& y_obs, int map_degree,
                          const QuadratureRule& joint_rule, double rank_rel_tol,
                          double pinv_rel_tol) {
  validate(fluct, "reduce_germ");
  validate(z, "reduce_germ");
  if (joint_rule.dim < std::max(fluct.germ_end(), z.germ_end()))
    throw std::invalid_argument("reduce_germ: rule does not span the joint germ");

  const Eigen::MatrixXd& germ = joint_rule.nodes; // G x S
  const Eigen::Index G = germ.rows();
  const Eigen::Index S = germ.cols();
  const Eigen::MatrixXd xts = evaluate(fluct, germ); // M x S
  const Eigen::MatrixXd zs = evaluate(z, germ);      // I x S
  const Eigen::Index M = xts.rows();

  // Conditional cross moments E[fluct germ^T | y] (M x G)...
  Eigen::MatrixXd cross_t(M * G, S);
  for (Eigen::Index s = 0; s < S; ++s)
    Eigen::Map<Eigen::MatrixXd>(cross_t.col(s).data(), M, G) =
        xts.col(s) * germ.col(s).transpose();
  const Eigen::VectorXd rvec =
      conditional_estimate(cross_t, zs, joint_rule.weights, map_degree, y_obs);
  const Eigen::MatrixXd R = Eigen::Map<const Eigen::MatrixXd>(rvec.data(), M, G);

  // ... and the conditional germ second moment (G x G).
  Eigen::MatrixXd sec_t(G * G, S);
  for (Eigen::Index s = 0; s < S; ++s)
    Eigen::Map<Eigen::MatrixXd>(sec_t.col(s).data(), G, G) =
        germ.col(s) * germ.col(s).transpose();
  const Eigen::VectorXd cvec =
      conditional_estimate(sec_t, zs, joint_rule.weights, map_degree, y_obs);
  Eigen::MatrixXd C = Eigen::Map<const Eigen::MatrixXd>(cvec.data(), G, G);
  C = 0.5 * (C + C.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-6 * std::max(lam.cwiseAbs().sum(), 1e-300))
    throw std::runtime_error(
        "reduce_germ: conditional second moment has a significantly negative eigenvalue");
  lam = lam.cwiseMax(0.0);

  // Whitening Lambda^{-1/2} Q^T (Moore-Penrose on the null space).
  const double lcut = pinv_rel_tol * std::max(lam.maxCoeff(), 0.0);
  Eigen::VectorXd isqrt = Eigen::VectorXd::Zero(G);
  for (Eigen::Index i = 0; i < G; ++i)
    if (lam[i] > lcut) isqrt[i] = 1.0 / std::sqrt(lam[i]);

  // Cross block in whitened coordinates; its SVD picks the zeta directions.
  // Using the whitened block keeps the right singular vectors orthogonal to
  // the null space, so E[zeta zeta^T | y] = I holds even for singular Lambda.
  const Eigen::MatrixXd Rw = R * es.eigenvectors() * isqrt.asDiagonal(); // M x G
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Rw, Eigen::ComputeThinV);

  GermReduction red;
  red.singular_values = svd.singularValues();
  red.cond_sec_moment = C;
  const double smax = red.singular_values.size() ? red.singular_values[0] : 0.0;
  for (Eigen::Index i = 0; i < red.singular_values.size(); ++i)
    if (red.singular_values[i] > rank_rel_tol * smax) ++red.rank;
  if (smax <= 0.0 || red.rank == 0)
    throw std::runtime_error("reduce_germ: fluctuation carries no conditional germ correlation");

  red.A = svd.matrixV().leftCols(red.rank).transpose() * isqrt.asDiagonal() *
          es.eigenvectors().transpose(); // rank x G
  return red;
}

ReexpansionResult reexpand_posterior(const PceVector& fluct, const Eigen::VectorXd& mean,
                                     const GermReduction& red, int zeta_degree,
                                     const PceVector& z, const Eigen::VectorXd& y_obs,
                                     int map_degree, const QuadratureRule& joint_rule,
                                     const Eigen::MatrixXd* match_cov) {
  validate(fluct, "reexpand_posterior");
  if (mean.size() != fluct.dim())
    throw std::invalid_argument("reexpand_posterior: mean dimension mismatch");
  if (red.A.cols() != joint_rule.dim)
    throw std::invalid_argument("reexpand_posterior: reduction and rule germ mismatch");

  const Eigen::MatrixXd zeta = red.A * joint_rule.nodes;  // rank x S
  const HermiteBasis zbasis = hermite_basis(red.rank, zeta_degree);
  const Eigen::MatrixXd phi = eval_basis(zbasis, zeta);   // S x J
  const Eigen::Index J = phi.cols();
  const Eigen::Index S = phi.rows();
  const Eigen::MatrixXd xts = evaluate(fluct, joint_rule.nodes); // M x S
  const Eigen::MatrixXd zs = evaluate(z, joint_rule.nodes);
  const Eigen::Index M = xts.rows();

  // Conditional Gram Phi_ab = E[phi_a phi_b | y].
  Eigen::MatrixXd gram_t(J * J, S);
  for (Eigen::Index s = 0; s < S; ++s)
    Eigen::Map<Eigen::MatrixXd>(gram_t.col(s).data(), J, J) =
        phi.row(s).transpose() * phi.row(s);
  const Eigen::VectorXd gvec =
      conditional_estimate(gram_t, zs, joint_rule.weights, map_degree, y_obs);
  Eigen::MatrixXd gram = Eigen::Map<const Eigen::MatrixXd>(gvec.data(), J, J);
  gram = 0.5 * (gram + gram.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  const double cond = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e10))
    throw std::runtime_error(
        "reexpand_posterior: conditional Gram matrix is ill-conditioned (> 1e10)");

  // Right-hand sides E[fluct phi_a | y], then the Galerkin solve.
  Eigen::MatrixXd proj_t(M * J, S);
  for (Eigen::Index s = 0; s < S; ++s)
    Eigen::Map<Eigen::MatrixXd>(proj_t.col(s).data(), M, J) =
        xts.col(s) * phi.row(s);
  const Eigen::VectorXd bvec =
      conditional_estimate(proj_t, zs, joint_rule.weights, map_degree, y_obs);
  const Eigen::MatrixXd B = Eigen::Map<const Eigen::MatrixXd>(bvec.data(), M, J);

  Eigen::MatrixXd coef = es.eigenvectors() *
                         es.eigenvalues().cwiseInverse().asDiagonal() *
                         es.eigenvectors().transpose() * B.transpose(); // J x M

  if (match_cov) {
    const Eigen::MatrixXd cj = coef.transpose() * gram * coef;
    require_psd(*match_cov, "reexpand_posterior(match_cov)");
    coef = coef * (sqrt_psd(*match_cov) * pinv_sqrt_psd(cj)).transpose();
  }

  ReexpansionResult out;
  out.cond_gram = gram;
  out.gram_condition = cond;
  out.cond_cov = coef.transpose() * gram * coef;
  out.posterior.basis = zbasis;
  out.posterior.germ_offset = 0;
  out.posterior.coeffs = coef.transpose();
  out.posterior.coeffs.col(0) += mean;
  return out;
}

} // namespace gmkf
