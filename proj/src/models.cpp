#include "gmkf/models.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gmkf::models {

ForwardModel identity_model(int dim) {
  ForwardModel m;
  m.param_dim = m.state_dim = m.obs_dim = dim;
  m.solve = [](const Eigen::VectorXd& p) { return p; };
  m.observe = [](const Eigen::VectorXd&, const Eigen::VectorXd& u) { return u; };
  return m;
}

ForwardModel cubic_model() {
  ForwardModel m;
  m.param_dim = m.state_dim = m.obs_dim = 1;
  m.solve = [](const Eigen::VectorXd& p) { return p; };
  m.observe = [](const Eigen::VectorXd&, const Eigen::VectorXd& u) {
    return Eigen::VectorXd(u.array().cube());
  };
  return m;
}

// --- Lorenz-84 ------------------------------------------------------------

namespace {
constexpr double kDaysPerUnit = 5.0; // one model time unit is five days
}

Eigen::Vector3d lorenz84_rhs(const Eigen::Vector3d& s, const Lorenz84Params& prm) {
  const double x = s[0], y = s[1], z = s[2];
  return {-y * y - z * z - prm.a * x + prm.a * prm.F,
          x * y - prm.b * x * z - y + prm.G,
          prm.b * x * y + x * z - z};
}

Eigen::Vector3d lorenz84_step(const Eigen::Vector3d& s, double h_days,
                              const Lorenz84Params& prm) {
  const double h = h_days / kDaysPerUnit;
  const Eigen::Vector3d k1 = lorenz84_rhs(s, prm);
  const Eigen::Vector3d k2 = lorenz84_rhs(s + 0.5 * h * k1, prm);
  const Eigen::Vector3d k3 = lorenz84_rhs(s + 0.5 * h * k2, prm);
  const Eigen::Vector3d k4 = lorenz84_rhs(s + h * k3, prm);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::Vector3d lorenz84_integrate(Eigen::Vector3d s, double t_days, double h_days,
                                   const Lorenz84Params& prm) {
  if (h_days <= 0.0) throw std::invalid_argument("lorenz84_integrate: step must be positive");
  double t = 0.0;
  while (t < t_days - 1e-12) {
    const double h = std::min(h_days, t_days - t);
    s = lorenz84_step(s, h, prm);
    t += h;
  }
  return s;
}

// --- 1-D diffusion ------------------------------------------------------

double diffusion1d_mode(int m, double s) {
  switch (m) {
    case 0: return 1.0;
    case 1: return 2.0 * s - 1.0;
    case 2: return (6.0 * s - 6.0) * s + 1.0;
    case 3: return ((20.0 * s - 30.0) * s + 12.0) * s - 1.0;
    case 4: return (((70.0 * s - 140.0) * s + 90.0) * s - 20.0) * s + 1.0;
    default: throw std::invalid_argument("diffusion1d_mode: only modes 0..4 are provided");
  }
}

namespace {

double log_kappa(const Eigen::VectorXd& p, double s) {
  double q = 0.0;
  for (Eigen::Index m = 0; m < p.size(); ++m) q += p[m] * diffusion1d_mode(static_cast<int>(m), s);
  return q;
}

Eigen::MatrixXd diffusion_matrix(const Diffusion1dConfig& cfg, const Eigen::VectorXd& p) {
  const int n = cfg.n_cells;
  const int N = n - 1;
  const double h = 1.0 / n;
  Eigen::VectorXd kappa_half(n); // kappa at cell midpoints (i + 1/2) h, i = 0..n-1
  for (int i = 0; i < n; ++i)
    kappa_half[i] = std::exp(log_kappa(p, (i + 0.5) * h));

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (int i = 1; i <= N; ++i) {
    const double km = kappa_half[i - 1];
    const double kp = kappa_half[i];
    A(i - 1, i - 1) = (km + kp) / (h * h);
    if (i > 1) A(i - 1, i - 2) = -km / (h * h);
    if (i < N) A(i - 1, i) = -kp / (h * h);
  }
  return A;
}

} // namespace

ForwardModel diffusion1d_model(const Diffusion1dConfig& cfg) {
  if (cfg.n_cells < 2) throw std::invalid_argument("diffusion1d_model: need at least two cells");
  if (cfg.n_modes < 1 || cfg.n_modes > 5)
    throw std::invalid_argument("diffusion1d_model: n_modes must be in 1..5");
  if (cfg.n_patches < 1 || cfg.n_cells % cfg.n_patches != 0)
    throw std::invalid_argument("diffusion1d_model: n_patches must divide n_cells");

  const int n = cfg.n_cells;
  const int N = n - 1;
  const double h = 1.0 / n;
  Eigen::VectorXd f(N);
  for (int i = 1; i <= N; ++i) f[i - 1] = cfg.rhs(i * h);

  ForwardModel m;
  m.param_dim = cfg.n_modes;
  m.state_dim = N;
  m.obs_dim = cfg.n_patches;
  m.solve = [cfg, f](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    return diffusion_matrix(cfg, p).partialPivLu().solve(f);
  };
  m.observe = [cfg, h](const Eigen::VectorXd&, const Eigen::VectorXd& u) {
    const int per = cfg.n_cells / cfg.n_patches;
    Eigen::VectorXd y(cfg.n_patches);
    // Composite trapezoid over each patch; boundary values are zero.
    auto node = [&](int i) { return (i == 0 || i == cfg.n_cells) ? 0.0 : u[i - 1]; };
    for (int j = 0; j < cfg.n_patches; ++j) {
      const int i0 = j * per;
      double acc = 0.5 * (node(i0) + node(i0 + per));
      for (int i = i0 + 1; i < i0 + per; ++i) acc += node(i);
      y[j] = acc * h * cfg.n_patches; // (h * sum) / (patch length 1/P)
    }
    return y;
  };
  m.residual = [cfg, f](const Eigen::VectorXd& u, const Eigen::VectorXd& p) -> Eigen::VectorXd {
    return f - diffusion_matrix(cfg, p) * u;
  };
  m.residual_jacobian = [cfg](const Eigen::VectorXd&, const Eigen::VectorXd& p) -> Eigen::MatrixXd {
    return -diffusion_matrix(cfg, p);
  };
  return m;
}

// --- 1-D Bayes oracle ----------------------------------------------------

namespace {

// Gauss-Kronrod 7/15 pair on [-1, 1].
constexpr double kKX[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                           0.741531185599394, 0.586087235467691, 0.405845151377397,
                           0.207784955007898, 0.0};
constexpr double kKW[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                           0.140653259715525, 0.169004726639267, 0.190350578064785,
                           0.204432940075298, 0.209482141084728};
constexpr double kGW[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct GkEstimate {
  double kronrod;
  double gauss;
};

GkEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double vk = 0.0, vg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double fp = f(c + r * kKX[i]);
    const double fm = (i == 7) ? fp : f(c - r * kKX[i]);
    const double pair = (i == 7) ? fp : fp + fm;
    vk += kKW[i] * pair;
    if (i % 2 == 1) vg += kGW[i / 2] * pair; // odd slots are the Gauss-7 nodes
  }
  return {vk * r, vg * r};
}

double gk_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                   int depth) {
  const GkEstimate e = gk15(f, a, b);
  const double err = std::abs(e.kronrod - e.gauss);
  if (depth <= 0 || err <= tol * std::max(std::abs(e.kronrod), 1e-300))
    return e.kronrod;
  const double c = 0.5 * (a + b);
  return gk_adaptive(f, a, c, tol, depth - 1) + gk_adaptive(f, c, b, tol, depth - 1);
}

} // namespace

double integrate_gk(const std::function<double(double)>& f, double lo, double hi,
                    double rel_tol, int max_depth) {
  if (!(hi > lo)) throw std::invalid_argument("integrate_gk: needs hi > lo");
  // Split the interval so local acceptance happens against local scale.
  const int pieces = 8;
  const double w = (hi - lo) / pieces;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i)
    total += gk_adaptive(f, lo + i * w, lo + (i + 1) * w, rel_tol, max_depth);
  return total;
}

BayesOracle1d bayes_oracle_1d(const std::function<double(double)>& prior_pdf,
                              const std::function<double(double)>& observe, double y_obs,
                              double noise_std, double lo, double hi, double rel_tol) {
  if (!(noise_std > 0.0))
    throw std::invalid_argument("bayes_oracle_1d: noise_std must be positive");
  const double inv2s2 = 0.5 / (noise_std * noise_std);
  const double norm = 1.0 / (noise_std * std::sqrt(2.0 * std::numbers::pi));
  auto weight = [&](double p) {
    const double d = y_obs - observe(p);
    return prior_pdf(p) * norm * std::exp(-d * d * inv2s2);
  };

  BayesOracle1d out;
  out.norm_const = integrate_gk(weight, lo, hi, rel_tol);
  if (!(out.norm_const > 0.0))
    throw std::runtime_error("bayes_oracle_1d: evidence integrates to zero");
  const double m1 = integrate_gk([&](double p) { return p * weight(p); }, lo, hi, rel_tol) /
                    out.norm_const;
  const double m2 =
      integrate_gk([&](double p) { return p * p * weight(p); }, lo, hi, rel_tol) /
      out.norm_const;
  out.mean = m1;
  out.variance = m2 - m1 * m1;
  return out;
}

Eigen::VectorXd bayes_oracle_pdf(const std::function<double(double)>& prior_pdf,
                                 const std::function<double(double)>& observe, double y_obs,
                                 double noise_std, double lo, double hi,
                                 const Eigen::VectorXd& grid, double rel_tol) {
  const BayesOracle1d o = bayes_oracle_1d(prior_pdf, observe, y_obs, noise_std, lo, hi, rel_tol);
  const double inv2s2 = 0.5 / (noise_std * noise_std);
  const double norm = 1.0 / (noise_std * std::sqrt(2.0 * std::numbers::pi));
  Eigen::VectorXd pdf(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double d = y_obs - observe(grid[i]);
    pdf[i] = prior_pdf(grid[i]) * norm * std::exp(-d * d * inv2s2) / o.norm_const;
  }
  return pdf;
}

} // namespace gmkf::models
