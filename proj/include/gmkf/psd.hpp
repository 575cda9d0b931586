#pragma once

#include <Eigen/Core>

namespace gmkf {

/// Spectral decomposition helpers for symmetric positive semi-definite
/// matrices.  All of them symmetrize the input, decompose once, and treat
/// eigenvalues below rel_tol * lambda_max as the null space (Moore-Penrose).

/// Pseudo-inverse; `rank_out` (optional) receives the retained rank.
Eigen::MatrixXd pinv_psd(const Eigen::MatrixXd& C, double rel_tol = 1e-12,
                         int* rank_out = nullptr);

/// Symmetric square root C^{1/2}.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& C, double rel_tol = 1e-12);

/// Symmetric square root of the pseudo-inverse, C^{-1/2} on the range.
Eigen::MatrixXd pinv_sqrt_psd(const Eigen::MatrixXd& C, double rel_tol = 1e-12);

/// Throw std::invalid_argument unless C is square, symmetric within
/// `sym_tol` * max|C|, and has no eigenvalue below -`psd_tol` * lambda_max.
void require_psd(const Eigen::MatrixXd& C, const char* who, double sym_tol = 1e-10,
                 double psd_tol = 1e-10);

} // namespace gmkf
