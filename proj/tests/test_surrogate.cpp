#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>

#include "gmkf/collocation.hpp"
#include "gmkf/galerkin.hpp"
#include "gmkf/models.hpp"

using namespace gmkf;

namespace {

// The scalar cubic benchmark: u^3 + u = f with a germ-dependent right side.
ForwardModel cubic_state_model() {
  ForwardModel m;
  m.param_dim = 1;
  m.state_dim = 1;
  m.obs_dim = 1;
  m.solve = [](const Eigen::VectorXd& p) {
    // Newton on u^3 + u - f = 0 from u = 0; f = 2 + p.
    const double f = 2.0 + p[0];
    double u = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double r = u * u * u + u - f;
      if (std::abs(r) < 1e-14) break;
      u -= r / (3.0 * u * u + 1.0);
    }
    return Eigen::VectorXd::Constant(1, u);
  };
  m.observe = [](const Eigen::VectorXd&, const Eigen::VectorXd& u) { return u; };
  m.residual = [](const Eigen::VectorXd& u, const Eigen::VectorXd& p) {
    return Eigen::VectorXd::Constant(1, (2.0 + p[0]) - (u[0] * u[0] * u[0] + u[0]));
  };
  m.residual_jacobian = [](const Eigen::VectorXd& u, const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Constant(1, 1, -(3.0 * u[0] * u[0] + 1.0));
  };
  return m;
}

}  // namespace

TEST_SUITE("surrogate") {

TEST_CASE("interpolation recovers polynomial coefficients exactly") {
  // Map xi -> xi^3, fitted on 4 points with the degree-3 basis (square system).
  const GermMap cube = [](const Eigen::VectorXd& xi) {
    return Eigen::VectorXd::Constant(1, xi[0] * xi[0] * xi[0]);
  };
  const HermiteBasis basis = hermite_basis(1, 3);
  const QuadratureRule rule = gauss_hermite_rule(1, 4);
  FitDiagnostics diag;
  const PceVector v = fit_interpolation(cube, basis, rule.nodes, &diag);
  // xi^3 = He_3 + 3 He_1; normalized: sqrt(6) on He_3.
  CHECK(v.coeffs(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.coeffs(0, 1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(v.coeffs(0, 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.coeffs(0, 3) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));
  CHECK(diag.condition > 0.0);
  CHECK(!diag.warn);
}

TEST_CASE("interpolation rejects wrong point counts and singular designs") {
  const GermMap id = [](const Eigen::VectorXd& xi) { return xi; };
  const HermiteBasis basis = hermite_basis(1, 3);
  CHECK_THROWS(fit_interpolation(id, basis, gauss_hermite_rule(1, 5).nodes));
  Eigen::MatrixXd dup(1, 4);
  dup << 0.5, 0.5, 0.5, 0.5;  // rank-1 design
  CHECK_THROWS(fit_interpolation(id, basis, dup));
}

TEST_CASE("near-singular interpolation designs set the warn flag") {
  const GermMap id = [](const Eigen::VectorXd& xi) { return xi; };
  const HermiteBasis basis = hermite_basis(1, 3);
  Eigen::MatrixXd pts(1, 4);
  pts << -1.0, 0.0, 1.0, 1.0 + 2e-5;  // nearly coincident pair
  FitDiagnostics diag;
  const PceVector v = fit_interpolation(id, basis, pts, &diag);
  CHECK(diag.warn);
  CHECK(diag.condition > 1e8);
  CHECK(v.coeffs(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("regression at a quadrature design equals projection") {
  // Non-polynomial map so neither route is trivially exact.
  const GermMap m = [](const Eigen::VectorXd& xi) {
    Eigen::VectorXd out(2);
    out[0] = std::exp(0.3 * xi[0] - 0.2 * xi[1]);
    out[1] = std::sin(xi[0]) + 0.5 * xi[1] * xi[1];
    return out;
  };
  const HermiteBasis basis = hermite_basis(2, 3);
  const QuadratureRule rule = gauss_hermite_rule(2, 6);
  const PceVector proj = fit_projection(m, rule, basis);
  const PceVector regr = fit_regression(m, basis, rule.nodes, &rule.weights);
  CHECK((proj.coeffs - regr.coeffs).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("all three fits agree on an in-span polynomial") {
  const GermMap m = [](const Eigen::VectorXd& xi) {
    return Eigen::VectorXd::Constant(1, 1.5 - xi[0] + 0.25 * (xi[0] * xi[0] - 1.0));
  };
  const HermiteBasis basis = hermite_basis(1, 2);
  const QuadratureRule square_rule = gauss_hermite_rule(1, 3);  // S = T = 3
  const QuadratureRule big_rule = gauss_hermite_rule(1, 8);
  const PceVector itp = fit_interpolation(m, basis, square_rule.nodes);
  const PceVector prj = fit_projection(m, big_rule, basis);
  const PceVector reg = fit_regression(m, basis, big_rule.nodes, &big_rule.weights);
  CHECK((itp.coeffs - prj.coeffs).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((reg.coeffs - prj.coeffs).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("regression reports the unresolved terms on rank deficiency") {
  const GermMap id = [](const Eigen::VectorXd& xi) { return xi; };
  const HermiteBasis basis = hermite_basis(1, 3);
  Eigen::MatrixXd pts(1, 6);
  pts << 0.0, 0.0, 0.0, 1.0, 1.0, 1.0;  // two distinct points, four terms
  try {
    fit_regression(id, basis, pts);
    FAIL("expected a rank-deficiency error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("rank") != std::string::npos);
  }
}

TEST_CASE("unweighted regression is plain least squares") {
  // Overdetermined line fit with exact data.
  const GermMap line = [](const Eigen::VectorXd& xi) {
    return Eigen::VectorXd::Constant(1, 2.0 + 0.5 * xi[0]);
  };
  const HermiteBasis basis = hermite_basis(1, 1);
  Eigen::MatrixXd pts(1, 5);
  pts << -2.0, -1.0, 0.0, 1.0, 2.0;
  const PceVector v = fit_regression(line, basis, pts);
  CHECK(v.coeffs(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(v.coeffs(0, 1) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("galerkin solves the scalar cubic and matches node-wise solves") {
  const ForwardModel model = cubic_state_model();
  const PceVector params =
      gaussian_pce(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
  const HermiteBasis state_basis = hermite_basis(1, 4);
  const QuadratureRule rule = gauss_hermite_rule(1, 10);
  GalerkinReport report;
  const PceVector u = solve_galerkin(model, params, ParameterTransform::identity(), rule,
                                     state_basis, {}, &report);
  CHECK(report.converged);
  CHECK(report.iterations < 50);
  CHECK(report.residual_norm <= 1e-8);

  // Independent route: deterministic solves at the nodes, then projection.
  const PceVector nodewise =
      fit_projection(observation_map(model, params), rule, state_basis);
  CHECK((u.coeffs - nodewise.coeffs).cwiseAbs().maxCoeff() <= 1e-6);

  // The mean coefficient lies inside the interval of deterministic roots.
  double lo = 1e300, hi = -1e300;
  for (Eigen::Index s = 0; s < rule.size(); ++s) {
    const double us = model.solve(rule.nodes.col(s))[0];
    lo = std::min(lo, us);
    hi = std::max(hi, us);
  }
  CHECK(u.coeffs(0, 0) >= lo);
  CHECK(u.coeffs(0, 0) <= hi);
  // At the germ mean (f = 2) the deterministic root is exactly 1.
  CHECK(model.solve(Eigen::VectorXd::Zero(1))[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("galerkin on a linear state equation converges immediately") {
  ForwardModel m;
  m.param_dim = 1;
  m.state_dim = 1;
  m.obs_dim = 1;
  m.solve = [](const Eigen::VectorXd& p) {
    return Eigen::VectorXd::Constant(1, 0.5 * (1.0 + p[0]));
  };
  m.observe = [](const Eigen::VectorXd&, const Eigen::VectorXd& u) { return u; };
  m.residual = [](const Eigen::VectorXd& u, const Eigen::VectorXd& p) {
    return Eigen::VectorXd::Constant(1, (1.0 + p[0]) - 2.0 * u[0]);
  };
  m.residual_jacobian = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Constant(1, 1, -2.0);
  };
  const PceVector params =
      gaussian_pce(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
  GalerkinReport report;
  const PceVector u = solve_galerkin(m, params, ParameterTransform::identity(),
                                     gauss_hermite_rule(1, 4), hermite_basis(1, 1), {},
                                     &report);
  CHECK(report.converged);
  CHECK(report.iterations <= 2);
  CHECK(u.coeffs(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(u.coeffs(0, 1) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("galerkin requires the residual callables") {
  ForwardModel m = cubic_state_model();
  m.residual = nullptr;
  const PceVector params =
      gaussian_pce(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
  CHECK_THROWS(solve_galerkin(m, params, ParameterTransform::identity(),
                              gauss_hermite_rule(1, 4), hermite_basis(1, 2)));
}

TEST_CASE("observation maps compose the transform, solve, and observe") {
  const ForwardModel model = cubic_state_model();
  // Parameters live on a log scale: PCE coordinates are log(p - 0) / 1.
  const ParameterTransform t = ParameterTransform::log_shifted(0.0, 1.0);
  const PceVector params = gaussian_pce(Eigen::VectorXd::Constant(1, 0.0),
                                        Eigen::MatrixXd::Constant(1, 1, 1.0));
  const GermMap om = observation_map(model, params, t);
  Eigen::VectorXd xi = Eigen::VectorXd::Constant(1, 0.7);
  const double p = std::exp(0.7);  // inverse transform of the PCE value
  const double expect = model.solve(Eigen::VectorXd::Constant(1, p))[0];
  CHECK(om(xi)[0] == doctest::Approx(expect).epsilon(1e-12));
}

}  // TEST_SUITE
