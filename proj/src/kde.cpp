#include "gmkf/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gmkf/kernels.hpp"

namespace gmkf {

namespace {

double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return s[lo] * (1.0 - frac) + s[hi] * frac;
}

} // namespace

double silverman_bandwidth(const Eigen::VectorXd& samples) {
  const Eigen::Index S = samples.size();
  if (S < 2) throw std::invalid_argument("silverman_bandwidth: need at least two samples");

  const double m = samples.mean();
  const double var = (samples.array() - m).square().sum() / static_cast<double>(S - 1);
  if (!(var > 0.0))
    throw std::invalid_argument("silverman_bandwidth: samples have zero variance");
  const double sigma = std::sqrt(var);

  std::vector<double> sorted(samples.data(), samples.data() + S);
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  double spread = sigma;
  if (iqr > 0.0) spread = std::min(sigma, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(S), -0.2);
}

Eigen::VectorXd kde_pdf(const Eigen::VectorXd& samples, const Eigen::VectorXd& grid,
                        double h) {
  if (h <= 0.0) h = silverman_bandwidth(samples);
  Eigen::VectorXd out(grid.size());
  kernels::gauss_kde(samples.data(), static_cast<std::size_t>(samples.size()), grid.data(),
                     static_cast<std::size_t>(grid.size()), 1.0 / h, out.data());
  const double scale =
      1.0 / (static_cast<double>(samples.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  return out * scale;
}

Eigen::VectorXd kde_default_grid(const Eigen::VectorXd& samples, Eigen::Index n) {
  const double h = silverman_bandwidth(samples);
  const double lo = samples.minCoeff() - 3.0 * h;
  const double hi = samples.maxCoeff() + 3.0 * h;
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

} // namespace gmkf
