#include "gmkf/ce_filter.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>

#include "gmkf/psd.hpp"

namespace gmkf {

namespace {

void check_joint_inputs(const PceVector& x_f, const PceVector& z,
                        const Eigen::VectorXd& y_obs, const QuadratureRule& rule,
                        const char* who) {
  validate(x_f, who);
  validate(z, who);
  if (y_obs.size() != z.dim())
    throw std::invalid_argument(std::string(who) + ": measurement dimension != z dimension");
  if (z.germ_offset != 0 || x_f.germ_end() > z.germ_end())
    throw std::invalid_argument(std::string(who) +
                                ": germ layout mismatch (z must span the joint germ)");
  if (rule.dim < z.germ_end())
    throw std::invalid_argument(std::string(who) + ": rule does not span the joint germ");
}

} // namespace

PosteriorRv ce_filter_update(const PceVector& x_f, const PceVector& z,
                             const Eigen::VectorXd& y_obs, int map_degree,
                             const QuadratureRule& joint_rule, int fluct_degree) {
  check_joint_inputs(x_f, z, y_obs, joint_rule, "ce_filter_update");
  if (map_degree < 1)
    throw std::invalid_argument("ce_filter_update: map degree must be >= 1");

  const Eigen::MatrixXd xs = evaluate(x_f, joint_rule.nodes); // M x S
  const Eigen::MatrixXd zs = evaluate(z, joint_rule.nodes);   // I x S

  PosteriorRv post;
  post.map = fit_optimal_map(xs, zs, joint_rule.weights, map_degree);
  post.mean = post.map(y_obs);

  if (fluct_degree < 0)
    fluct_degree = std::max(x_f.basis.set.degree, map_degree * z.basis.set.degree);
  const HermiteBasis fluct_basis = hermite_basis(joint_rule.dim, fluct_degree);
  post.fluctuation =
      project_values(xs - post.map.evaluate_batch(zs), joint_rule, fluct_basis);
  return post;
}

Eigen::MatrixXd corrected_covariance(const PceVector& x_f, const PceVector& z,
                                     const Eigen::VectorXd& y_obs, int map_degree,
                                     const QuadratureRule& joint_rule) {
  check_joint_inputs(x_f, z, y_obs, joint_rule, "corrected_covariance");

  const Eigen::MatrixXd xs = evaluate(x_f, joint_rule.nodes);
  const Eigen::MatrixXd zs = evaluate(z, joint_rule.nodes);
  const Eigen::Index M = xs.rows();
  const Eigen::Index S = xs.cols();

  // Second-moment targets vec(x x^T) alongside the first-moment map.
  Eigen::MatrixXd xx(M * M, S);
  for (Eigen::Index s = 0; s < S; ++s) {
    Eigen::Map<Eigen::MatrixXd>(xx.col(s).data(), M, M) = xs.col(s) * xs.col(s).transpose();
  }
  const PolynomialMap m1 = fit_optimal_map(xs, zs, joint_rule.weights, map_degree);
  const PolynomialMap m2 = fit_optimal_map(xx, zs, joint_rule.weights, map_degree);

  const Eigen::VectorXd mean = m1(y_obs);
  const Eigen::VectorXd e2 = m2(y_obs);
  Eigen::MatrixXd C =
      Eigen::Map<const Eigen::MatrixXd>(e2.data(), M, M) - mean * mean.transpose();
  C = 0.5 * (C + C.transpose());

  // Clip estimation noise; meaningfully negative directions mean the maps
  // were too poor to produce a covariance at all.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  Eigen::VectorXd lam = es.eigenvalues();
  const double floor = -1e-6 * std::max(lam.cwiseAbs().sum(), 1e-300);
  if (lam.minCoeff() < floor)
    throw std::runtime_error(
        "corrected_covariance: estimate has a significantly negative eigenvalue");
  lam = lam.cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

PceVector covariance_match(PceVector fluct, const Eigen::MatrixXd& target, double rel_tol) {
  validate(fluct, "covariance_match");
  if (target.rows() != fluct.dim() || target.cols() != fluct.dim())
    throw std::invalid_argument("covariance_match: target shape mismatch");
  require_psd(target, "covariance_match");

  const Eigen::MatrixXd chat = covariance(fluct);
  const Eigen::MatrixXd L = sqrt_psd(target, rel_tol) * pinv_sqrt_psd(chat, rel_tol);
  fluct.coeffs = L * fluct.coeffs;
  return fluct;
}

} // namespace gmkf
