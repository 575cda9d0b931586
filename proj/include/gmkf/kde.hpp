#pragma once

#include <Eigen/Core>

namespace gmkf {

/// Silverman's rule-of-thumb bandwidth, robust form:
/// 0.9 * min(sigma, IQR/1.34) * S^{-1/5}.  Throws for degenerate samples.
double silverman_bandwidth(const Eigen::VectorXd& samples);

/// Gaussian-kernel density estimate of the sample distribution, evaluated on
/// `grid`.  Bandwidth defaults to Silverman's rule (pass h > 0 to override).
Eigen::VectorXd kde_pdf(const Eigen::VectorXd& samples, const Eigen::VectorXd& grid,
                        double h = 0.0);

/// Evenly spaced grid spanning the samples plus three bandwidths of margin.
Eigen::VectorXd kde_default_grid(const Eigen::VectorXd& samples, Eigen::Index n = 256);

} // namespace gmkf
