#pragma once

#include <Eigen/Core>

#include <vector>

#include "gmkf/collocation.hpp"

namespace gmkf {

struct GalerkinOptions {
  double rel_tol = 1e-9;  // on the block residual norm, relative to the start
  int max_iterations = 50;
  int max_backtracks = 10; // step halvings per Newton iteration
};

struct GalerkinReport {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> history; // block residual norm per iteration
};

/// Intrusive-in-spirit stochastic Galerkin solve carried out with quadrature:
/// find state coefficients U (N x T) such that the block residual
/// R_alpha = sum_s w_s psi_alpha(xi_s) residual(u(xi_s), p(xi_s)) vanishes.
/// Newton's method with the block tangent
/// K[(alpha,n),(beta,m)] = sum_s w_s psi_alpha(xi_s) J(xi_s)_{n,m} psi_beta(xi_s),
/// J = residual_jacobian, plus a halving line search on ||R||.  The initial
/// guess is the deterministic solve at the germ mean.  Throws if the model
/// lacks the residual callables or Newton fails to converge.
PceVector solve_galerkin(const ForwardModel& model, const PceVector& params,
                         const ParameterTransform& transform, const QuadratureRule& rule,
                         const HermiteBasis& state_basis,
                         const GalerkinOptions& opts = {}, GalerkinReport* report = nullptr);

} // namespace gmkf
