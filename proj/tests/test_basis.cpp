#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <vector>

#include "gmkf/hermite.hpp"
#include "gmkf/multi_index.hpp"
#include "gmkf/quadrature.hpp"

using namespace gmkf;

namespace {

// Brute-force enumeration oracle: all exponent tuples with sum <= degree.
int count_total_degree(int dim, int degree) {
  std::vector<int> idx(dim, 0);
  int count = 0;
  while (true) {
    int sum = 0;
    for (int v : idx) sum += v;
    if (sum <= degree) ++count;
    int k = dim - 1;
    while (k >= 0 && idx[k] == degree) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return count;
}

double double_factorial(int k) {  // (k-1)!! for even k, used for E[xi^k]
  double v = 1.0;
  for (int j = k - 1; j > 1; j -= 2) v *= j;
  return v;
}

}  // namespace

TEST_SUITE("basis") {

TEST_CASE("graded-lexicographic ordering is pinned") {
  const MultiIndexSet s = build_index_set(2, 2);
  REQUIRE(s.size() == 6);
  const std::vector<MultiIndex> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int i = 0; i < 6; ++i) CHECK(s.indices[i] == expect[i]);

  // Degree-3 block order in three variables: degree ascending, lexicographically
  // larger first within a degree.
  const MultiIndexSet t = build_index_set(3, 2);
  REQUIRE(t.size() == 10);
  CHECK(t.indices[1] == MultiIndex{1, 0, 0});
  CHECK(t.indices[2] == MultiIndex{0, 1, 0});
  CHECK(t.indices[3] == MultiIndex{0, 0, 1});
  CHECK(t.indices[4] == MultiIndex{2, 0, 0});
  CHECK(t.indices[9] == MultiIndex{0, 0, 2});
}

TEST_CASE("index set sizes match the combinatorial counts") {
  for (int dim = 1; dim <= 4; ++dim)
    for (int deg = 0; deg <= 5; ++deg) {
      const MultiIndexSet s = build_index_set(dim, deg);
      CHECK(s.size() == count_total_degree(dim, deg));
      CHECK(s.size() == total_degree_count(dim, deg));
      CHECK(std::is_sorted(s.indices.begin(), s.indices.end(), graded_lex_less));
      const MultiIndexSet t = build_index_set(dim, deg, Truncation::TensorDegree);
      int tensor = 1;
      for (int k = 0; k < dim; ++k) tensor *= deg + 1;
      CHECK(t.size() == tensor);
    }
}

TEST_CASE("custom index sets are validated, sorted, and deduplicated") {
  const MultiIndexSet s = custom_index_set(2, {{0, 1}, {0, 0}, {2, 0}, {0, 1}});
  CHECK(s.size() == 3);
  CHECK(s.indices[0] == MultiIndex{0, 0});
  CHECK(s.indices[1] == MultiIndex{0, 1});
  CHECK(s.indices[2] == MultiIndex{2, 0});
  CHECK(s.degree == 2);
  CHECK_THROWS(custom_index_set(2, {{0, -1}}));
  CHECK_THROWS(custom_index_set(2, {{0, 1, 2}}));
  CHECK_THROWS(custom_index_set(2, {}));
}

TEST_CASE("embedding into a joint germ preserves positions") {
  const MultiIndexSet a = build_index_set(1, 2);
  const MultiIndexSet b = build_index_set(1, 1);
  const MultiIndexSet u = union_embedded(a, 0, b, 1);
  CHECK(u.dim == 2);
  // Contains the constant, all of a's indices at offset 0, b's at offset 1.
  const auto pos = index_positions(u);
  CHECK(pos.count({0, 0}) == 1);
  CHECK(pos.count({1, 0}) == 1);
  CHECK(pos.count({2, 0}) == 1);
  CHECK(pos.count({0, 1}) == 1);
  CHECK(embed_index({2}, 0, 2) == MultiIndex{2, 0});
  CHECK(embed_index({2}, 1, 3) == MultiIndex{0, 2, 0});
}

TEST_CASE("gauss-hermite nodes and weights match pinned references") {
  const QuadratureRule r = gauss_hermite_rule(1, 5);
  REQUIRE(r.size() == 5);
  const double nodes[5] = {-2.8569700138728056, -1.3556261799742659, 0.0,
                           1.3556261799742659, 2.8569700138728056};
  const double weights[5] = {0.011257411327720677, 0.22207592200561257, 0.53333333333333355,
                             0.22207592200561257, 0.011257411327720677};
  std::vector<int> order(5);
  for (int i = 0; i < 5; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return r.nodes(0, a) < r.nodes(0, b); });
  for (int i = 0; i < 5; ++i) {
    CHECK(r.nodes(0, order[i]) == doctest::Approx(nodes[i]).epsilon(1e-14));
    CHECK(r.weights(order[i]) == doctest::Approx(weights[i]).epsilon(1e-13));
  }
  CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rules integrate standard-normal moments to their exactness degree") {
  for (int n : {2, 4, 8}) {
    const QuadratureRule r = gauss_hermite_rule(1, n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const double got =
          (r.nodes.row(0).transpose().array().pow(k) * r.weights.array()).sum();
      const double want = (k % 2 == 1) ? 0.0 : double_factorial(k);
      CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, want));
    }
  }
  // Just beyond the exactness degree the rule must NOT reproduce the moment
  // (otherwise the exactness bookkeeping is broken).
  const QuadratureRule r3 = gauss_hermite_rule(1, 3);
  const double m6 = (r3.nodes.row(0).transpose().array().pow(6) * r3.weights.array()).sum();
  CHECK(std::abs(m6 - 15.0) > 1.0);
}

TEST_CASE("tensor rules and the node cap") {
  const QuadratureRule r = gauss_hermite_rule(2, 3);
  CHECK(r.size() == 9);
  CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  // Mixed moment E[x^2 y^4] = 1 * 3.
  double m = 0.0;
  for (Eigen::Index s = 0; s < r.size(); ++s)
    m += r.weights[s] * r.nodes(0, s) * r.nodes(0, s) * std::pow(r.nodes(1, s), 4);
  CHECK(m == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS(gauss_hermite_rule(8, 10));  // 1e8 nodes exceeds the cap
  CHECK_THROWS(gauss_hermite_rule(0, 3));
  CHECK_THROWS(gauss_hermite_rule(1, 0));
}

TEST_CASE("normalized basis is orthonormal under the quadrature gram matrix") {
  const HermiteBasis basis = hermite_basis(2, 3);
  const QuadratureRule rule = gauss_hermite_rule(2, 4);  // exact to degree 7
  const Eigen::MatrixXd G = gram_matrix(basis, rule);
  CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("monic basis gram matrix is diag(alpha!)") {
  HermiteBasis basis = hermite_basis(2, 3, /*normalized=*/false);
  const QuadratureRule rule = gauss_hermite_rule(2, 4);
  const Eigen::MatrixXd G = gram_matrix(basis, rule);
  for (int a = 0; a < basis.set.size(); ++a)
    for (int b = 0; b < basis.set.size(); ++b) {
      const double want = (a == b) ? basis_norm_sq(basis.set.indices[a]) : 0.0;
      CHECK(std::abs(G(a, b) - want) <= 1e-10 * std::max(1.0, want));
    }
}

TEST_CASE("basis evaluation separates into univariate products") {
  const HermiteBasis basis = hermite_basis(2, 2, /*normalized=*/false);
  Eigen::MatrixXd pts(2, 1);
  pts << 0.7, -1.2;
  const Eigen::MatrixXd v = eval_basis(basis, pts);  // 1 x 6
  // Order: 1, x, y, He2(x), x y, He2(y).
  CHECK(v(0, 0) == doctest::Approx(1.0));
  CHECK(v(0, 1) == doctest::Approx(0.7));
  CHECK(v(0, 2) == doctest::Approx(-1.2));
  CHECK(v(0, 3) == doctest::Approx(0.7 * 0.7 - 1.0));
  CHECK(v(0, 4) == doctest::Approx(0.7 * -1.2));
  CHECK(v(0, 5) == doctest::Approx(1.2 * 1.2 - 1.0));
}

}  // TEST_SUITE
