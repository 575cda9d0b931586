#include "gmkf/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gmkf {

namespace {

void check_interval(double a, double b, const char* who) {
  if (!(b > a)) throw std::invalid_argument(std::string(who) + ": needs b > a");
}

double to_unit(const ParameterTransform& t, double p, const char* who) {
  const double u = (p - t.a) / (t.b - t.a);
  if (!(u > 0.0) || !(u < 1.0))
    throw std::domain_error(std::string(who) + ": parameter outside the open interval");
  return u;
}

} // namespace

ParameterTransform ParameterTransform::identity() { return {}; }

ParameterTransform ParameterTransform::log_shifted(double a, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("log_shifted: scale must be positive");
  ParameterTransform t;
  t.kind = Kind::LogShifted;
  t.a = a;
  t.scale = scale;
  return t;
}

ParameterTransform ParameterTransform::logit_interval(double a, double b) {
  check_interval(a, b, "logit_interval");
  ParameterTransform t;
  t.kind = Kind::LogitInterval;
  t.a = a;
  t.b = b;
  return t;
}

ParameterTransform ParameterTransform::probit_interval(double a, double b) {
  check_interval(a, b, "probit_interval");
  ParameterTransform t;
  t.kind = Kind::ProbitInterval;
  t.a = a;
  t.b = b;
  return t;
}

ParameterTransform ParameterTransform::arctan_interval(double a, double b) {
  check_interval(a, b, "arctan_interval");
  ParameterTransform t;
  t.kind = Kind::ArctanInterval;
  t.a = a;
  t.b = b;
  return t;
}

double transform_forward(const ParameterTransform& t, double p) {
  using Kind = ParameterTransform::Kind;
  switch (t.kind) {
    case Kind::Identity:
      return p;
    case Kind::LogShifted:
      if (!(p > t.a)) throw std::domain_error("log_shifted: parameter must exceed the shift");
      return std::log((p - t.a) / t.scale);
    case Kind::LogitInterval: {
      const double u = to_unit(t, p, "logit_interval");
      return std::log(u / (1.0 - u));
    }
    case Kind::ProbitInterval:
      return normal_quantile(to_unit(t, p, "probit_interval"));
    case Kind::ArctanInterval:
      return std::tan(std::numbers::pi * (to_unit(t, p, "arctan_interval") - 0.5));
  }
  throw std::logic_error("transform_forward: unknown kind");
}

double transform_inverse(const ParameterTransform& t, double x) {
  using Kind = ParameterTransform::Kind;
  switch (t.kind) {
    case Kind::Identity:
      return x;
    case Kind::LogShifted:
      return t.a + t.scale * std::exp(x);
    case Kind::LogitInterval:
      return t.a + (t.b - t.a) / (1.0 + std::exp(-x));
    case Kind::ProbitInterval:
      return t.a + (t.b - t.a) * normal_cdf(x);
    case Kind::ArctanInterval:
      return t.a + (t.b - t.a) * (std::atan(x) / std::numbers::pi + 0.5);
  }
  throw std::logic_error("transform_inverse: unknown kind");
}

Eigen::VectorXd transform_forward(const ParameterTransform& t, const Eigen::VectorXd& p) {
  Eigen::VectorXd x(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) x[i] = transform_forward(t, p[i]);
  return x;
}

Eigen::VectorXd transform_inverse(const ParameterTransform& t, const Eigen::VectorXd& x) {
  Eigen::VectorXd p(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) p[i] = transform_inverse(t, x[i]);
  return p;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_quantile(double u) {
  if (!(u > 0.0) || !(u < 1.0))
    throw std::domain_error("normal_quantile: argument must lie in (0, 1)");

  // Acklam's rational approximation, then one Halley step against the exact
  // erfc-based CDF, which pushes the error to ~1e-15.
  static constexpr double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (u <= 1.0 - p_low) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }

  const double e = normal_cdf(x) - u;
  const double t = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - t / (1.0 + 0.5 * x * t);
}

} // namespace gmkf
