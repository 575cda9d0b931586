#pragma once

#include <Eigen/Core>

#include <functional>

#include "gmkf/pce_vector.hpp"
#include "gmkf/transforms.hpp"

namespace gmkf {

/// Deterministic solver/observation pair the non-intrusive machinery drives.
/// Everything downstream touches the model only through these callables, so
/// any black-box code fits; the callables must be safe to invoke repeatedly
/// (they are called once per design/quadrature point).
///
/// `residual` and `residual_jacobian` are optional and only needed by the
/// Galerkin route: residual(u, p) = f - A(u; p) and residual_jacobian(u, p)
/// = d residual / d u (an N x N matrix).
struct ForwardModel {
  int param_dim = 0;
  int state_dim = 0;
  int obs_dim = 0;

  std::function<Eigen::VectorXd(const Eigen::VectorXd& p)> solve;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& p, const Eigen::VectorXd& u)> observe;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& u, const Eigen::VectorXd& p)> residual;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd& u, const Eigen::VectorXd& p)>
      residual_jacobian;
};

/// Map from a germ realization to a model-side quantity (observation,
/// state, ...).  The surrogate fits consume these.
using GermMap = std::function<Eigen::VectorXd(const Eigen::VectorXd& xi)>;

/// Compose xi -> observe(p(xi), solve(p(xi))) where p(xi) is the parameter
/// PCE pushed through the inverse transform (PCE coordinates are the
/// unconstrained ones).  `params` must start at germ offset 0.
GermMap observation_map(const ForwardModel& model, const PceVector& params,
                        const ParameterTransform& t = ParameterTransform::identity());

/// Same composition but returning the full state vector.
GermMap state_map(const ForwardModel& model, const PceVector& params,
                  const ParameterTransform& t = ParameterTransform::identity());

} // namespace gmkf
