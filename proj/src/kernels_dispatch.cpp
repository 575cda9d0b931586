#include "gmkf/kernels.hpp"

namespace gmkf::kernels {

namespace {

using HermiteFn = void (*)(const double*, std::size_t, int, double*);
using KdeFn = void (*)(const double*, std::size_t, const double*, std::size_t, double, double*);

struct Lanes {
  HermiteFn hermite;
  KdeFn kde;
  const char* name;
};

Lanes pick_lanes() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return {&hermite_batch_avx2, &gauss_kde_avx2, "avx2"};
#endif
  return {&hermite_batch_scalar, &gauss_kde_scalar, "scalar"};
}

const Lanes& lanes() {
  static const Lanes l = pick_lanes();
  return l;
}

} // namespace

const char* active_lane() { return lanes().name; }

void hermite_batch(const double* x, std::size_t n, int p, double* out) {
  lanes().hermite(x, n, p, out);
}

void gauss_kde(const double* x, std::size_t n, const double* grid, std::size_t m,
               double inv_h, double* out) {
  lanes().kde(x, n, grid, m, inv_h, out);
}

} // namespace gmkf::kernels
