#include "gmkf/galerkin.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace gmkf {

namespace {

// Block residual R (T*N stacked, coefficient-major) for state coefficients U.
Eigen::VectorXd block_residual(const ForwardModel& model, const Eigen::MatrixXd& U,
                               const Eigen::MatrixXd& psi, const Eigen::VectorXd& w,
                               const Eigen::MatrixXd& pvals) {
  const Eigen::Index S = psi.rows();
  const Eigen::Index T = psi.cols();
  const Eigen::Index N = U.rows();
  Eigen::VectorXd R = Eigen::VectorXd::Zero(T * N);
  for (Eigen::Index s = 0; s < S; ++s) {
    const Eigen::VectorXd us = U * psi.row(s).transpose();
    const Eigen::VectorXd rs = model.residual(us, pvals.col(s));
    for (Eigen::Index a = 0; a < T; ++a)
      R.segment(a * N, N) += w[s] * psi(s, a) * rs;
  }
  return R;
}

} // namespace

PceVector solve_galerkin(const ForwardModel& model, const PceVector& params,
                         const ParameterTransform& transform, const QuadratureRule& rule,
                         const HermiteBasis& state_basis, const GalerkinOptions& opts,
                         GalerkinReport* report) {
  if (!model.residual || !model.residual_jacobian)
    throw std::invalid_argument("solve_galerkin: model needs residual and residual_jacobian");
  if (!model.solve)
    throw std::invalid_argument("solve_galerkin: model needs solve for the initial guess");
  if (rule.dim != state_basis.dim())
    throw std::invalid_argument("solve_galerkin: rule and state basis dimension mismatch");
  if (params.germ_offset != 0)
    throw std::invalid_argument("solve_galerkin: parameter PCE must start at germ offset 0");
  if (params.germ_end() > rule.dim)
    throw std::invalid_argument("solve_galerkin: rule covers fewer germ variables than params");

  const Eigen::MatrixXd psi = eval_basis(state_basis, rule.nodes); // S x T
  const Eigen::Index S = rule.size();
  const Eigen::Index T = state_basis.size();
  const Eigen::Index N = model.state_dim;

  // Parameter values at the nodes, through the transform.
  Eigen::MatrixXd pvals(params.dim(), S);
  {
    const Eigen::MatrixXd x = evaluate(params, rule.nodes);
    for (Eigen::Index s = 0; s < S; ++s)
      pvals.col(s) = transform_inverse(transform, Eigen::VectorXd(x.col(s)));
  }

  // Initial guess: the deterministic solution at the germ mean, as the
  // constant term.
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(N, T);
  U.col(0) = model.solve(transform_inverse(transform, Eigen::VectorXd(mean(params))));

  Eigen::VectorXd R = block_residual(model, U, psi, rule.weights, pvals);
  const double r0 = std::max(R.norm(), 1e-300);
  double rnorm = R.norm();
  if (report) {
    report->history.clear();
    report->history.push_back(rnorm);
  }

  int it = 0;
  bool converged = rnorm <= opts.rel_tol * r0;
  Eigen::MatrixXd KT(T * N, T * N);
  while (!converged && it < opts.max_iterations) {
    ++it;
    // Assemble the block tangent d(-R)/dU: residual_jacobian is d r/d u, and
    // Newton solves (-dR/dU) delta = R, i.e. KT delta = R with
    // KT = -sum_s w_s psi_a J_s psi_b.
    KT.setZero();
    for (Eigen::Index s = 0; s < S; ++s) {
      const Eigen::VectorXd us = U * psi.row(s).transpose();
      const Eigen::MatrixXd Js = model.residual_jacobian(us, pvals.col(s));
      for (Eigen::Index a = 0; a < T; ++a) {
        const double wa = rule.weights[s] * psi(s, a);
        if (wa == 0.0) continue;
        for (Eigen::Index b = 0; b < T; ++b) {
          const double c = wa * psi(s, b);
          if (c != 0.0) KT.block(a * N, b * N, N, N).noalias() -= c * Js;
        }
      }
    }

    const Eigen::VectorXd delta = KT.partialPivLu().solve(R);
    if (!delta.allFinite())
      throw std::runtime_error("solve_galerkin: singular block tangent");

    // Backtracking line search on the block residual norm.
    double step = 1.0;
    bool accepted = false;
    Eigen::MatrixXd Utrial;
    Eigen::VectorXd Rtrial;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      Utrial = U;
      for (Eigen::Index a = 0; a < T; ++a) Utrial.col(a) += step * delta.segment(a * N, N);
      Rtrial = block_residual(model, Utrial, psi, rule.weights, pvals);
      if (Rtrial.norm() < rnorm) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error("solve_galerkin: line search failed to reduce the residual");

    U = Utrial;
    R = Rtrial;
    rnorm = R.norm();
    if (report) report->history.push_back(rnorm);
    converged = rnorm <= opts.rel_tol * r0;
  }

  if (report) {
    report->converged = converged;
    report->iterations = it;
    report->residual_norm = rnorm;
  }
  if (!converged)
    throw std::runtime_error("solve_galerkin: Newton did not converge within the iteration cap");

  PceVector out;
  out.basis = state_basis;
  out.coeffs = U;
  return out;
}

} // namespace gmkf
