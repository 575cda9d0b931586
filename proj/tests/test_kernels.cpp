#include "doctest.h"

#include <cmath>
#include <vector>

#include "gmkf/kernels.hpp"
#include "gmkf/rng.hpp"

using namespace gmkf;

namespace {

// Straightforward three-term recurrence, one point at a time.
std::vector<double> hermite_reference(const std::vector<double>& x, int p) {
  const std::size_t n = x.size();
  std::vector<double> out(n * static_cast<std::size_t>(p + 1));
  for (std::size_t i = 0; i < n; ++i) {
    double prev = 0.0, cur = 1.0;
    out[i] = cur;
    for (int j = 1; j <= p; ++j) {
      const double next = x[i] * cur - static_cast<double>(j - 1) * prev;
      prev = cur;
      cur = next;
      out[i + n * static_cast<std::size_t>(j)] = cur;
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("hermite_batch matches the plain recurrence and pinned values") {
  Rng rng(101);
  for (std::size_t n : {std::size_t{1}, std::size_t{7}, std::size_t{64}, std::size_t{1003}}) {
    std::vector<double> x(n);
    for (double& v : x) v = 6.0 * (rng.uniform() - 0.5);
    const int p = 12;
    std::vector<double> got(n * (p + 1));
    kernels::hermite_batch(x.data(), n, p, got.data());
    const std::vector<double> ref = hermite_reference(x, p);
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-13));
  }

  // Independently computed polynomial values.
  const double xs[3] = {1.3, -0.7, 2.1};
  double table[3 * 13];
  kernels::hermite_batch(xs, 3, 12, table);
  CHECK(table[0 + 3 * 5] == doctest::Approx(1.2429299999999985).epsilon(1e-12));
  CHECK(table[1 + 3 * 8] == doctest::Approx(-53.615523989999964).epsilon(1e-12));
  CHECK(table[2 + 3 * 12] == doctest::Approx(16377.935006110034).epsilon(1e-12));
}

TEST_CASE("dispatched lanes agree with the scalar reference") {
  INFO("active lane: ", kernels::active_lane());
  Rng rng(202);

  // Hermite tables: exact lane equivalence is not required (fma reassociation),
  // but agreement must be at rounding level.
  for (std::size_t n : {std::size_t{1}, std::size_t{4}, std::size_t{5}, std::size_t{31},
                        std::size_t{32}, std::size_t{257}}) {
    std::vector<double> x(n);
    for (double& v : x) v = 8.0 * (rng.uniform() - 0.5);
    for (int p : {0, 1, 3, 9}) {
      std::vector<double> a(n * static_cast<std::size_t>(p + 1)), b = a;
      kernels::hermite_batch(x.data(), n, p, a.data());
      kernels::hermite_batch_scalar(x.data(), n, p, b.data());
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max(1.0, std::abs(b[i]));
        CHECK(std::abs(a[i] - b[i]) <= 1e-12 * scale);
      }
    }
  }

  // KDE accumulation, including far-tail arguments that underflow.
  for (std::size_t n : {std::size_t{3}, std::size_t{33}, std::size_t{400}}) {
    std::vector<double> x(n), g(97);
    for (double& v : x) v = 4.0 * (rng.uniform() - 0.5);
    for (std::size_t j = 0; j < g.size(); ++j)
      g[j] = -60.0 + 120.0 * static_cast<double>(j) / static_cast<double>(g.size() - 1);
    std::vector<double> a(g.size()), b(g.size());
    kernels::gauss_kde(x.data(), n, g.data(), g.size(), 1.7, a.data());
    kernels::gauss_kde_scalar(x.data(), n, g.data(), g.size(), 1.7, b.data());
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (std::abs(b[j]) > 1e-200)
        CHECK(std::abs(a[j] - b[j]) <= 1e-12 * std::abs(b[j]));
      else
        CHECK(std::abs(a[j] - b[j]) <= 1e-280);
    }
  }
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 lane agrees with scalar when the cpu supports it") {
  if (std::string(kernels::active_lane()) != "avx2") {
    MESSAGE("cpu lacks avx2+fma; lane test skipped");
    return;
  }
  Rng rng(303);
  std::vector<double> x(129);
  for (double& v : x) v = 10.0 * (rng.uniform() - 0.5);
  std::vector<double> a(x.size() * 11), b(x.size() * 11);
  kernels::hermite_batch_avx2(x.data(), x.size(), 10, a.data());
  kernels::hermite_batch_scalar(x.data(), x.size(), 10, b.data());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i] - b[i]) <= 1e-12 * std::max(1.0, std::abs(b[i])));

  std::vector<double> g(55), ka(55), kb(55);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = -30.0 + 1.1 * static_cast<double>(j);
  kernels::gauss_kde_avx2(x.data(), x.size(), g.data(), g.size(), 0.9, ka.data());
  kernels::gauss_kde_scalar(x.data(), x.size(), g.data(), g.size(), 0.9, kb.data());
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (std::abs(kb[j]) > 1e-200)
      CHECK(std::abs(ka[j] - kb[j]) <= 1e-12 * std::abs(kb[j]));
    else
      CHECK(std::abs(ka[j] - kb[j]) <= 1e-280);
  }
}
#endif

TEST_CASE("kde kernel handles extreme separations without non-finite output") {
  // Arguments chosen so exp underflows to zero rather than producing junk.
  const double x[2] = {-1e4, 1e4};
  const double g[3] = {-1e4, 0.0, 1e4};
  double out[3];
  kernels::gauss_kde(x, 2, g, 3, 1.0, out);
  CHECK(std::isfinite(out[0]));
  CHECK(std::isfinite(out[1]));
  CHECK(std::isfinite(out[2]));
  CHECK(out[0] == doctest::Approx(1.0));  // the coincident sample contributes exp(0)
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(out[2] == doctest::Approx(1.0));
}

}  // TEST_SUITE
