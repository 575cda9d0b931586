#include "gmkf/kernels.hpp"

#include <cmath>

namespace gmkf::kernels {

namespace detail {

// Core of the scalar recurrence with an explicit leading dimension, so the
// SIMD lane can reuse it for ragged tails without changing the output layout.
void hermite_batch_strided(const double* x, std::size_t n, int p, double* out,
                           std::size_t ld) {
  for (std::size_t i = 0; i < n; ++i) {
    double hm = 1.0;
    out[i] = hm;
    if (p < 1) continue;
    double hc = x[i];
    out[ld + i] = hc;
    for (int j = 1; j < p; ++j) {
      const double hn = x[i] * hc - static_cast<double>(j) * hm;
      hm = hc;
      hc = hn;
      out[static_cast<std::size_t>(j + 1) * ld + i] = hc;
    }
  }
}

} // namespace detail

void hermite_batch_scalar(const double* x, std::size_t n, int p, double* out) {
  detail::hermite_batch_strided(x, n, p, out, n);
}

void gauss_kde_scalar(const double* x, std::size_t n, const double* grid, std::size_t m,
                      double inv_h, double* out) {
  for (std::size_t j = 0; j < m; ++j) {
    const double g = grid[j];
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (g - x[i]) * inv_h;
      acc += std::exp(-0.5 * t * t);
    }
    out[j] = acc;
  }
}

} // namespace gmkf::kernels
