#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "gmkf/ensemble.hpp"
#include "gmkf/kde.hpp"
#include "gmkf/pce_vector.hpp"
#include "gmkf/rng.hpp"
#include "gmkf/serialize.hpp"
#include "gmkf/transforms.hpp"

#include <nlohmann/json.hpp>

using namespace gmkf;

TEST_SUITE("rv") {

TEST_CASE("gaussian pce has the requested first two moments") {
  Eigen::VectorXd mu(2);
  mu << 1.0, -2.0;
  Eigen::MatrixXd A(2, 2);
  A << 0.5, 0.0, 0.3, 0.8;
  const PceVector v = gaussian_pce(mu, A);
  CHECK((mean(v) - mu).norm() <= 1e-15);
  CHECK((covariance(v) - A * A.transpose()).norm() <= 1e-14);
  CHECK(v.basis.set.degree == 1);
  CHECK(v.germ_offset == 0);
}

TEST_CASE("variance of a monic scalar expansion is sum coeff^2 alpha!") {
  PceVector v;
  v.basis = hermite_basis(1, 2, /*normalized=*/false);
  v.germ_offset = 0;
  v.coeffs.resize(1, 3);
  v.coeffs << 1.0, 2.0, 5.0;
  CHECK(mean(v)(0) == doctest::Approx(1.0));
  // var = 2^2 * 1! + 5^2 * 2! = 54
  CHECK(covariance(v)(0, 0) == doctest::Approx(54.0).epsilon(1e-14));
}

TEST_CASE("square and cube of the germ have the textbook variances") {
  // xi^2 = He_2 + 1 (monic): variance 2.  xi^3 = He_3 + 3 He_1: variance 15.
  PceVector sq;
  sq.basis = hermite_basis(1, 2, false);
  sq.germ_offset = 0;
  sq.coeffs.resize(1, 3);
  sq.coeffs << 1.0, 0.0, 1.0;
  CHECK(covariance(sq)(0, 0) == doctest::Approx(2.0));

  PceVector cube;
  cube.basis = hermite_basis(1, 3, false);
  cube.germ_offset = 0;
  cube.coeffs.resize(1, 4);
  cube.coeffs << 0.0, 3.0, 0.0, 1.0;
  CHECK(covariance(cube)(0, 0) == doctest::Approx(15.0));

  // Their evaluations really are the square and cube of the germ.
  Eigen::MatrixXd germ(1, 3);
  germ << -1.1, 0.4, 2.3;
  const Eigen::MatrixXd vs = evaluate(sq, germ);
  const Eigen::MatrixXd vc = evaluate(cube, germ);
  for (int s = 0; s < 3; ++s) {
    CHECK(vs(0, s) == doctest::Approx(germ(0, s) * germ(0, s)).epsilon(1e-14));
    CHECK(vc(0, s) == doctest::Approx(std::pow(germ(0, s), 3)).epsilon(1e-14));
  }
}

TEST_CASE("disjoint germ blocks are uncorrelated by construction") {
  const PceVector a =
      gaussian_pce(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), 0);
  const PceVector b =
      gaussian_pce(Eigen::VectorXd::Ones(3), 2.0 * Eigen::MatrixXd::Identity(3, 3), 2);
  const Eigen::MatrixXd C = covariance(a, b);
  CHECK(C.rows() == 2);
  CHECK(C.cols() == 3);
  CHECK(C.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("mixed normalization in covariance is rejected") {
  PceVector a = gaussian_pce(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
  PceVector b = a;
  b.basis.normalized = false;
  CHECK_THROWS(covariance(a, b));
}

TEST_CASE("embedding scatters coefficients onto a containing basis") {
  const PceVector a = gaussian_pce(Eigen::VectorXd::Constant(1, 3.0),
                                   Eigen::MatrixXd::Constant(1, 1, 2.0), 0);
  const HermiteBasis big = hermite_basis(2, 2);
  const PceVector e = embed_on(a, big.set);
  CHECK(e.coeffs.cols() == 6);
  CHECK(mean(e)(0) == doctest::Approx(3.0));
  CHECK(covariance(e)(0, 0) == doctest::Approx(4.0));
  Eigen::MatrixXd germ(2, 2);
  germ << 0.5, -1.0, 9.9, 9.9;  // second variable must not matter
  const Eigen::MatrixXd vals = evaluate(e, germ);
  CHECK(vals(0, 0) == doctest::Approx(3.0 + 2.0 * 0.5));
  CHECK(vals(0, 1) == doctest::Approx(3.0 - 2.0));
}

TEST_CASE("monte carlo sampling reproduces the moments loosely") {
  Eigen::VectorXd mu(2);
  mu << 0.5, -1.0;
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 0.0, 0.4, 0.9;
  const PceVector v = gaussian_pce(mu, A);
  Rng rng(7);
  const Eigen::MatrixXd s = sample(v, 200000, rng);
  const Eigen::VectorXd m = s.rowwise().mean();
  CHECK((m - mu).cwiseAbs().maxCoeff() < 0.02);
  const Eigen::MatrixXd centered = s.colwise() - m;
  const Eigen::MatrixXd C = centered * centered.transpose() / double(s.cols() - 1);
  CHECK((C - A * A.transpose()).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("rng streams are deterministic and forked streams differ") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  Rng c(42);
  Rng f1 = c.fork(1), f2 = c.fork(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i)
    if (f1.normal() == f2.normal()) ++equal;
  CHECK(equal == 0);
  Rng u(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("parameter transforms round-trip on their domains") {
  const ParameterTransform logt = ParameterTransform::log_shifted(0.5, 2.0);
  for (double p : {0.6, 1.0, 7.5, 300.0}) {
    const double q = logt.forward(p);
    CHECK(logt.inverse(q) == doctest::Approx(p).epsilon(1e-12));
  }
  const ParameterTransform logit = ParameterTransform::logit_interval(-1.0, 2.0);
  const ParameterTransform probit = ParameterTransform::probit_interval(-1.0, 2.0);
  const ParameterTransform atan = ParameterTransform::arctan_interval(-1.0, 2.0);
  for (double p : {-0.99, -0.25, 0.5, 1.3, 1.99}) {
    CHECK(logit.inverse(logit.forward(p)) == doctest::Approx(p).epsilon(1e-10));
    CHECK(probit.inverse(probit.forward(p)) == doctest::Approx(p).epsilon(1e-10));
    CHECK(atan.inverse(atan.forward(p)) == doctest::Approx(p).epsilon(1e-10));
  }
  // Inverse maps all of R into the interval.
  for (double q : {-30.0, -1.0, 0.0, 4.0, 30.0}) {
    for (const ParameterTransform* t : {&logit, &probit, &atan}) {
      const double p = t->inverse(q);
      CHECK(p > -1.0);
      CHECK(p < 2.0);
    }
  }
  const ParameterTransform id = ParameterTransform::identity();
  CHECK(id.forward(3.25) == 3.25);
  CHECK(id.inverse(-0.5) == -0.5);
}

TEST_CASE("normal quantile matches pinned reference values") {
  struct {
    double p, x;
  } ref[] = {{1e-12, -7.0344838253011313}, {0.01, -2.3263478740408408},
             {0.02425, -1.9729610513118849}, {0.3, -0.52440051270804089},
             {0.5, 0.0},                    {0.6, 0.25334710313579972},
             {0.975, 1.959963984540054},    {0.99999, 4.2648907939238407}};
  for (const auto& r : ref)
    CHECK(normal_quantile(r.p) == doctest::Approx(r.x).epsilon(1e-13));
  CHECK_THROWS(normal_quantile(0.0));
  CHECK_THROWS(normal_quantile(1.0));
}

TEST_CASE("kde matches a directly computed gaussian mixture") {
  Eigen::VectorXd s(3);
  s << -1.0, 0.0, 2.0;
  Eigen::VectorXd grid(3);
  grid << -1.5, 0.5, 2.5;
  const Eigen::VectorXd pdf = kde_pdf(s, grid, 0.8);
  CHECK(pdf[0] == doctest::Approx(0.16540628267137342).epsilon(1e-13));
  CHECK(pdf[1] == doctest::Approx(0.19405563341823287).epsilon(1e-13));
  CHECK(pdf[2] == doctest::Approx(0.13800460859158459).epsilon(1e-13));
}

TEST_CASE("silverman bandwidth uses the robust spread") {
  Eigen::VectorXd s(5);
  s << 0.0, 1.0, 2.0, 3.0, 4.0;
  // sd = 1.5811, iqr = 2 -> iqr/1.34 = 1.4925 wins.
  const double want = 0.9 * (2.0 / 1.34) * std::pow(5.0, -0.2);
  CHECK(silverman_bandwidth(s) == doctest::Approx(want).epsilon(1e-14));
  CHECK_THROWS(silverman_bandwidth(Eigen::VectorXd::Constant(8, 3.0)));
  CHECK_THROWS(silverman_bandwidth(Eigen::VectorXd::Constant(1, 3.0)));
}

TEST_CASE("default kde grid spans the samples plus three bandwidths") {
  Eigen::VectorXd s(5);
  s << 0.0, 1.0, 2.0, 3.0, 4.0;
  const double h = silverman_bandwidth(s);
  const Eigen::VectorXd g = kde_default_grid(s, 64);
  CHECK(g.size() == 64);
  CHECK(g[0] == doctest::Approx(-3.0 * h));
  CHECK(g[63] == doctest::Approx(4.0 + 3.0 * h));
  CHECK((g.tail(63) - g.head(63)).minCoeff() > 0.0);
}

TEST_CASE("kde integrates to one over a wide grid") {
  Rng rng(11);
  const Eigen::VectorXd s = rng.normal_vector(500);
  const Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(2000, -8.0, 8.0);
  const Eigen::VectorXd p = kde_pdf(s, g);
  const double dx = g[1] - g[0];
  CHECK(p.sum() * dx == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("ensembles report unbiased sample moments") {
  Ensemble e;
  e.members.resize(1, 4);
  e.members << 1.0, 2.0, 3.0, 6.0;
  CHECK(ensemble_mean(e)(0) == doctest::Approx(3.0));
  // sample variance with 1/(S-1): ((-2)^2 + (-1)^2 + 0 + 3^2)/3
  CHECK(ensemble_covariance(e)(0, 0) == doctest::Approx(14.0 / 3.0));
  Ensemble tiny;
  tiny.members.resize(1, 1);
  tiny.members << 1.0;
  CHECK_THROWS(ensemble_covariance(tiny));
}

TEST_CASE("json round trips preserve every structure") {
  const HermiteBasis basis = hermite_basis(2, 3);
  nlohmann::json jb = to_json(basis);
  const HermiteBasis basis2 = basis_from_json(jb);
  CHECK(basis2.set.indices == basis.set.indices);
  CHECK(basis2.normalized == basis.normalized);

  const QuadratureRule rule = gauss_hermite_rule(2, 4);
  const QuadratureRule rule2 = rule_from_json(to_json(rule));
  CHECK((rule2.nodes - rule.nodes).cwiseAbs().maxCoeff() == 0.0);
  CHECK((rule2.weights - rule.weights).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd A(2, 2);
  A << 1.0, 0.0, 0.4, 0.9;
  const PceVector v = gaussian_pce(Eigen::Vector2d(0.5, -1.0), A, 3);
  const PceVector v2 = pce_from_json(to_json(v));
  CHECK(v2.germ_offset == 3);
  CHECK((v2.coeffs - v.coeffs).cwiseAbs().maxCoeff() == 0.0);
  CHECK(v2.basis.set.indices == v.basis.set.indices);

  GainOperator g;
  g.K = A;
  g.C_xz = A * 2.0;
  g.C_z = Eigen::MatrixXd::Identity(2, 2);
  g.pinv_rank = 2;
  const GainOperator g2 = gain_from_json(to_json(g));
  CHECK((g2.K - g.K).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g2.pinv_rank == 2);

  PolynomialMap m;
  m.features = build_index_set(1, 2);
  m.coeffs.resize(1, 3);
  m.coeffs << 0.5, 1.5, -0.25;
  const PolynomialMap m2 = map_from_json(to_json(m));
  CHECK((m2.coeffs - m.coeffs).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m2.features.indices == m.features.indices);

  // A custom (non-total-degree) index set keeps its exact term list.
  PceVector w;
  w.basis = HermiteBasis{custom_index_set(2, {{0, 0}, {1, 1}}), true};
  w.germ_offset = 0;
  w.coeffs.resize(1, 2);
  w.coeffs << 1.0, 2.0;
  const PceVector w2 = pce_from_json(to_json(w));
  CHECK(w2.basis.set.indices == w.basis.set.indices);
}

TEST_CASE("ensemble csv round trips through the writers") {
  Ensemble e;
  e.members.resize(2, 3);
  e.members << 1.0, 2.5, -0.125, 4.0, 5.0, 1e-17;
  std::stringstream ss;
  write_ensemble_csv(ss, e);
  const Ensemble back = read_ensemble_csv(ss);
  CHECK(back.members.rows() == 2);
  CHECK(back.members.cols() == 3);
  CHECK((back.members - e.members).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("serialized quadrature rules are validated on load") {
  nlohmann::json j = to_json(gauss_hermite_rule(1, 3));
  j["weights"][0] = -0.5;
  CHECK_THROWS(rule_from_json(j));
}

}  // TEST_SUITE
