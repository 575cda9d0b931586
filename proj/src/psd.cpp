#include "gmkf/psd.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace gmkf {

namespace {

// Eigen-decomposition of the symmetrized input with a spectral function
// applied to the eigenvalues (zero below the relative cut).
Eigen::MatrixXd spectral_apply(const Eigen::MatrixXd& C, double rel_tol,
                               double (*fn)(double), int* rank_out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (C + C.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_apply: eigen-decomposition failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double cut = rel_tol * std::max(lam.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(lam.size());
  int rank = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] > cut) {
      f[i] = fn(lam[i]);
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

Eigen::MatrixXd pinv_psd(const Eigen::MatrixXd& C, double rel_tol, int* rank_out) {
  return spectral_apply(C, rel_tol, [](double x) { return 1.0 / x; }, rank_out);
}

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& C, double rel_tol) {
  return spectral_apply(C, rel_tol, [](double x) { return std::sqrt(x); }, nullptr);
}

Eigen::MatrixXd pinv_sqrt_psd(const Eigen::MatrixXd& C, double rel_tol) {
  return spectral_apply(C, rel_tol, [](double x) { return 1.0 / std::sqrt(x); }, nullptr);
}

void require_psd(const Eigen::MatrixXd& C, const char* who, double sym_tol, double psd_tol) {
  if (C.rows() != C.cols())
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
  const double scale = std::max(C.cwiseAbs().maxCoeff(), 1.0);
  if ((C - C.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
    throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (C + C.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (es.eigenvalues().minCoeff() < -psd_tol * std::max(lmax, 1.0))
    throw std::invalid_argument(std::string(who) + ": matrix is not positive semi-definite");
}

} // namespace gmkf
