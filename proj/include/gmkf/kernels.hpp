#pragma once

#include <cstddef>

// Low-level batched kernels for the two hot loops of the library: evaluating
// the probabilists' Hermite recurrence at many points at once, and Gaussian
// kernel-density accumulation over a grid.  Each kernel has a plain scalar
// reference implementation and (on x86-64) an AVX2 variant; the dispatched
// entry points select the widest lane the running CPU supports, once, at
// first use.  The variants are equivalence-tested against the scalar lane.

namespace gmkf::kernels {

/// Name of the lane the dispatched entry points resolved to ("scalar" or "avx2").
const char* active_lane();

/// Fill a column-major table out[i + n*j] = He_j(x[i]) for j = 0..p, where
/// He_j is the monic probabilists' Hermite polynomial (He_0 = 1, He_1 = x,
/// He_{j+1} = x He_j - j He_{j-1}).  `out` must hold n*(p+1) doubles.
void hermite_batch(const double* x, std::size_t n, int p, double* out);
void hermite_batch_scalar(const double* x, std::size_t n, int p, double* out);

/// For every grid point g[j], accumulate sum_i exp(-0.5 * ((g[j]-x[i])*inv_h)^2)
/// into out[j] (overwriting).  The caller applies the 1/(n h sqrt(2 pi)) scale.
void gauss_kde(const double* x, std::size_t n, const double* grid, std::size_t m,
               double inv_h, double* out);
void gauss_kde_scalar(const double* x, std::size_t n, const double* grid, std::size_t m,
                      double inv_h, double* out);

#if defined(__x86_64__) || defined(_M_X64)
void hermite_batch_avx2(const double* x, std::size_t n, int p, double* out);
void gauss_kde_avx2(const double* x, std::size_t n, const double* grid, std::size_t m,
                    double inv_h, double* out);
#endif

} // namespace gmkf::kernels
