#include "gmkf/collocation.hpp"

#include <Eigen/Dense>

#include <sstream>
#include <stdexcept>

namespace gmkf {

namespace {

double svd_condition(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

} // namespace

Eigen::MatrixXd evaluate_at(const GermMap& map, const Eigen::MatrixXd& points) {
  const Eigen::Index S = points.cols();
  if (S == 0) throw std::invalid_argument("evaluate_at: empty design");
  Eigen::VectorXd first = map(points.col(0));
  Eigen::MatrixXd values(first.size(), S);
  values.col(0) = first;
  for (Eigen::Index s = 1; s < S; ++s) {
    values.col(s) = map(points.col(s));
    if (values.col(s).size() != first.size())
      throw std::invalid_argument("evaluate_at: map output dimension changed between points");
  }
  return values;
}

PceVector fit_interpolation(const GermMap& map, const HermiteBasis& basis,
                            const Eigen::MatrixXd& points, FitDiagnostics* diag) {
  if (points.rows() != basis.dim())
    throw std::invalid_argument("fit_interpolation: point dimension != basis dimension");
  if (points.cols() != basis.size())
    throw std::invalid_argument(
        "fit_interpolation: interpolation needs exactly one point per basis term");

  const Eigen::MatrixXd psi = eval_basis(basis, points); // T x T
  const double cond = svd_condition(psi);
  if (diag) {
    diag->condition = cond;
    diag->warn = cond > 1e8;
    if (diag->warn) {
      std::ostringstream os;
      os << "interpolation design condition " << cond << " exceeds 1e8";
      diag->message = os.str();
    }
  }
  if (!(cond < 1e12))
    throw std::runtime_error("fit_interpolation: design is numerically singular (condition > 1e12)");

  const Eigen::MatrixXd values = evaluate_at(map, points); // D x T
  PceVector out;
  out.basis = basis;
  out.coeffs = psi.partialPivLu().solve(values.transpose()).transpose();
  return out;
}

PceVector fit_regression(const GermMap& map, const HermiteBasis& basis,
                         const Eigen::MatrixXd& points, const Eigen::VectorXd* weights,
                         FitDiagnostics* diag) {
  if (points.rows() != basis.dim())
    throw std::invalid_argument("fit_regression: point dimension != basis dimension");
  const Eigen::Index S = points.cols();
  const int T = basis.size();
  if (S < T)
    throw std::invalid_argument("fit_regression: fewer points than basis terms");

  Eigen::MatrixXd psi = eval_basis(basis, points); // S x T
  Eigen::MatrixXd values = evaluate_at(map, points); // D x S
  if (weights) {
    if (weights->size() != S)
      throw std::invalid_argument("fit_regression: weight count != point count");
    if (weights->minCoeff() <= 0.0)
      throw std::invalid_argument("fit_regression: weights must be positive");
    const Eigen::VectorXd sw = weights->cwiseSqrt();
    psi = sw.asDiagonal() * psi;
    values = values * sw.asDiagonal();
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(psi);
  qr.setThreshold(1e-12);
  if (qr.rank() < T) {
    // Name the basis terms the design cannot resolve: the trailing columns of
    // the pivot permutation are the ones QR rejected.
    std::ostringstream os;
    os << "fit_regression: design is rank deficient (rank " << qr.rank() << " of " << T
       << "); unresolved terms:";
    const auto perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < T; ++k) {
      os << " (";
      const MultiIndex& alpha = basis.set.indices[perm[k]];
      for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
      os << ")";
    }
    throw std::runtime_error(os.str());
  }
  if (diag) {
    diag->condition = svd_condition(psi);
    diag->warn = false;
  }

  PceVector out;
  out.basis = basis;
  out.coeffs = qr.solve(values.transpose()).transpose();
  return out;
}

PceVector fit_projection(const GermMap& map, const QuadratureRule& rule,
                         const HermiteBasis& basis) {
  return project_values(evaluate_at(map, rule.nodes), rule, basis);
}

PceVector project_values(const Eigen::MatrixXd& values, const QuadratureRule& rule,
                         const HermiteBasis& basis) {
  if (rule.dim != basis.dim())
    throw std::invalid_argument("project_values: rule and basis dimension mismatch");
  if (values.cols() != rule.size())
    throw std::invalid_argument("project_values: value count != node count");

  const Eigen::MatrixXd psi = eval_basis(basis, rule.nodes);          // S x T
  const Eigen::MatrixXd gram = psi.transpose() * rule.weights.asDiagonal() * psi;
  const Eigen::MatrixXd rhs = psi.transpose() * rule.weights.asDiagonal() * values.transpose();

  PceVector out;
  out.basis = basis;
  out.coeffs = gram.ldlt().solve(rhs).transpose();
  return out;
}

} // namespace gmkf
