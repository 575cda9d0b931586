#pragma once

#include <Eigen/Core>

namespace gmkf {

/// Bijections between a constrained parameter set and all of R, applied
/// componentwise.  `forward` maps a constrained parameter p to the
/// unconstrained coordinate x the update machinery works in; `inverse` maps
/// any real x back into the constraint set.
struct ParameterTransform {
  enum class Kind { Identity, LogShifted, LogitInterval, ProbitInterval, ArctanInterval };

  Kind kind = Kind::Identity;
  double a = 0.0;     // lower bound (LogShifted, *Interval)
  double b = 1.0;     // upper bound (*Interval)
  double scale = 1.0; // LogShifted only

  static ParameterTransform identity();
  static ParameterTransform log_shifted(double a, double scale = 1.0);
  static ParameterTransform logit_interval(double a, double b);
  static ParameterTransform probit_interval(double a, double b);
  static ParameterTransform arctan_interval(double a, double b);
};

double transform_forward(const ParameterTransform& t, double p);
double transform_inverse(const ParameterTransform& t, double x);
Eigen::VectorXd transform_forward(const ParameterTransform& t, const Eigen::VectorXd& p);
Eigen::VectorXd transform_inverse(const ParameterTransform& t, const Eigen::VectorXd& x);

/// Standard normal quantile (inverse CDF), accurate to ~1e-15.
double normal_quantile(double u);
/// Standard normal CDF.
double normal_cdf(double x);

} // namespace gmkf
