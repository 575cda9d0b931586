#pragma once

#include <Eigen/Core>

#include <string>

#include "gmkf/forward_model.hpp"
#include "gmkf/quadrature.hpp"

namespace gmkf {

/// Numerical health report of a functional-approximation fit.
struct FitDiagnostics {
  double condition = 0.0; // of Psi (interpolation) or W Psi (regression)
  bool warn = false;      // condition exceeded the soft threshold
  std::string message;
};

/// Evaluate a germ map at every column of `points` (L x S); result D x S.
Eigen::MatrixXd evaluate_at(const GermMap& map, const Eigen::MatrixXd& points);

/// Interpolating (collocation) fit: exactly as many unisolvent points as
/// basis terms, solved as Psi u = y.  Throws when the point count is wrong or
/// the design is numerically singular (condition > 1e12); a condition above
/// 1e8 sets the warn flag on `diag`.
PceVector fit_interpolation(const GermMap& map, const HermiteBasis& basis,
                            const Eigen::MatrixXd& points, FitDiagnostics* diag = nullptr);

/// Weighted least-squares fit with S >= T design points.  Solved through the
/// QR factorization of diag(sqrt(w)) Psi — the square-root counterpart of the
/// normal equations, whose condition number is only the square root of
/// theirs.  Rank deficiency is an error naming the unresolvable terms.
PceVector fit_regression(const GermMap& map, const HermiteBasis& basis,
                         const Eigen::MatrixXd& points,
                         const Eigen::VectorXd* weights = nullptr,
                         FitDiagnostics* diag = nullptr);

/// Orthogonal projection with the rule's nodes/weights: coefficients solve
/// G u = sum_s w_s psi(xi_s) y_s with G the quadrature Gram matrix.  At a
/// quadrature design this is algebraically the same solution as
/// fit_regression with weights w_s.
PceVector fit_projection(const GermMap& map, const QuadratureRule& rule,
                         const HermiteBasis& basis);

/// Projection of precomputed node values (D x S, matching rule.size()).
PceVector project_values(const Eigen::MatrixXd& values, const QuadratureRule& rule,
                         const HermiteBasis& basis);

} // namespace gmkf
