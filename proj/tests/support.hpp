#pragma once

// Shared statistics helpers for the test suites and the acceptance runner.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

namespace testsupport {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
inline double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    s += (j % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, s));
}

/// Kolmogorov-Smirnov p-value of `samples` against the normal law N(mu, var),
/// using the Stephens small-sample correction of the asymptotic distribution.
inline double ks_pvalue_normal(Eigen::VectorXd samples, double mu, double var) {
  std::sort(samples.data(), samples.data() + samples.size());
  const double n = static_cast<double>(samples.size());
  const double sd = std::sqrt(var);
  double d = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    const double f = normal_cdf((samples[i] - mu) / sd);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  return kolmogorov_sf(lambda);
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Conjugate posterior of a Gaussian prior under repeated direct observation
/// with Gaussian noise: returns {mean, variance}.
inline std::pair<double, double> conjugate_sequence(double mu0, double var0, double noise_var,
                                                    const std::vector<double>& ys) {
  double mu = mu0, var = var0;
  for (double y : ys) {
    mu = (mu * noise_var + y * var) / (noise_var + var);
    var = var * noise_var / (noise_var + var);
  }
  return {mu, var};
}

}  // namespace testsupport
