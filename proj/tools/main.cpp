// Experiment runner: binds the models, surrogate fits, and filters into
// reproducible pipelines with machine-readable outputs.
//
//   gmkf run <config.json>     [--seed N] [--out-dir DIR] [--quiet]
//   gmkf compare <config.json> [--seed N] [--out-dir DIR] [--quiet]
//
// Exit codes: 0 success, 1 config error, 2 numerical failure.

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmkf/ce_filter.hpp"
#include "gmkf/enkf.hpp"
#include "gmkf/experiments.hpp"
#include "gmkf/kde.hpp"
#include "gmkf/models.hpp"
#include "gmkf/psd.hpp"
#include "gmkf/serialize.hpp"
#include "gmkf/spkf.hpp"

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
using namespace gmkf;

constexpr Eigen::Index kKdeSamples = 4096;
constexpr std::uint64_t kKdeStream = 0x6b6465;     // rng fork for plot sampling
constexpr std::uint64_t kMemberStream = 0x656e73;  // rng fork for ensemble draws

// --- config plumbing ---------------------------------------------------------

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_field(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail_field(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail_field(path + "." + it.key(), "unknown field");
  }
}

const json* find_member(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require_member(const json& j, const std::string& path, const char* key) {
  const json* v = find_member(j, key);
  if (v == nullptr) fail_field(path + "." + key, "required field is missing");
  return *v;
}

double as_num(const json& v, const std::string& path) {
  if (!v.is_number()) fail_field(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail_field(path, "expected an integer");
  return v.get<int>();
}

std::string as_str(const json& v, const std::string& path) {
  if (!v.is_string()) fail_field(path, "expected a string");
  return v.get<std::string>();
}

Eigen::VectorXd as_vec(const json& v, const std::string& path) {
  if (!v.is_array()) fail_field(path, "expected an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = as_num(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

double opt_num(const json& j, const std::string& path, const char* key, double dflt) {
  const json* v = find_member(j, key);
  return v == nullptr ? dflt : as_num(*v, path + "." + key);
}

int opt_int(const json& j, const std::string& path, const char* key, int dflt) {
  const json* v = find_member(j, key);
  return v == nullptr ? dflt : as_int(*v, path + "." + key);
}

std::string opt_str(const json& j, const std::string& path, const char* key,
                    const std::string& dflt) {
  const json* v = find_member(j, key);
  return v == nullptr ? dflt : as_str(*v, path + "." + key);
}

Eigen::VectorXd opt_vec(const json& j, const std::string& path, const char* key,
                        const Eigen::VectorXd& dflt) {
  const json* v = find_member(j, key);
  return v == nullptr ? dflt : as_vec(*v, path + "." + key);
}

// --- parsed specs ------------------------------------------------------------

struct FilterSpec {
  std::string kind;               // spkf | enkf | ce-filter
  int order = 2;                  // ce-filter map degree
  Eigen::Index ensemble_size = 1000;
};

struct SurrogateSpec {
  std::string route = "projection";  // collocation | regression | projection | galerkin
  int degree = 2;
  int points_per_dim = 8;
};

struct CommonSpec {
  std::string model_name;
  json model;
  SurrogateSpec surrogate;
  int n_updates = 1;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool quiet = false;
};

FilterSpec parse_filter(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "order", "ensemble_size"});
  FilterSpec f;
  f.kind = as_str(require_member(j, path, "kind"), path + ".kind");
  if (f.kind != "spkf" && f.kind != "enkf" && f.kind != "ce-filter")
    fail_field(path + ".kind", "unknown filter '" + f.kind + "' (expected spkf | enkf | ce-filter)");
  f.order = opt_int(j, path, "order", 2);
  if (f.order < 1) fail_field(path + ".order", "must be >= 1");
  f.ensemble_size = opt_int(j, path, "ensemble_size", 1000);
  if (f.ensemble_size < 2) fail_field(path + ".ensemble_size", "must be >= 2");
  return f;
}

SurrogateSpec parse_surrogate(const json* j, const std::string& path) {
  SurrogateSpec s;
  if (j == nullptr) return s;
  check_keys(*j, path, {"route", "degree", "points_per_dim"});
  s.route = opt_str(*j, path, "route", s.route);
  if (s.route != "collocation" && s.route != "regression" && s.route != "projection" &&
      s.route != "galerkin")
    fail_field(path + ".route",
               "unknown route '" + s.route +
                   "' (expected collocation | regression | projection | galerkin)");
  s.degree = opt_int(*j, path, "degree", s.degree);
  if (s.degree < 1) fail_field(path + ".degree", "must be >= 1");
  s.points_per_dim = opt_int(*j, path, "points_per_dim", s.points_per_dim);
  if (s.points_per_dim < 2) fail_field(path + ".points_per_dim", "must be >= 2");
  return s;
}

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool quiet = false;
};

CommonSpec parse_common(const json& j, const CliOverrides& ov, bool compare_mode) {
  check_keys(j, "(top level)",
             {"model", "surrogate", compare_mode ? "filters" : "filter", "n_updates", "seed",
              "out_dir"});
  CommonSpec c;
  c.model = require_member(j, "(top level)", "model");
  c.model_name = as_str(require_member(c.model, "model", "name"), "model.name");
  c.surrogate = parse_surrogate(find_member(j, "surrogate"), "surrogate");
  c.n_updates = opt_int(j, "(top level)", "n_updates", 1);
  if (c.n_updates < 1) fail_field("n_updates", "must be >= 1");
  if (ov.seed) {
    c.seed = *ov.seed;
  } else {
    const json* s = find_member(j, "seed");
    if (s == nullptr) fail_field("seed", "required field is missing (or pass --seed)");
    if (!s->is_number_integer()) fail_field("seed", "expected an integer");
    c.seed = s->get<std::uint64_t>();
  }
  c.out_dir = ov.out_dir ? *ov.out_dir : opt_str(j, "(top level)", "out_dir", "out");
  c.quiet = ov.quiet;
  return c;
}

SurrogateRoute route_of(const SurrogateSpec& s) {
  if (s.route == "collocation") return SurrogateRoute::Collocation;
  if (s.route == "regression") return SurrogateRoute::Regression;
  if (s.route == "galerkin") return SurrogateRoute::Galerkin;
  return SurrogateRoute::Projection;
}

// --- model specs -------------------------------------------------------------

struct IdentitySpec {
  IdentityConfig cfg;
  Eigen::VectorXd truth;
};

IdentitySpec parse_identity(const json& m, int n_updates) {
  check_keys(m, "model",
             {"name", "dim", "noise_std", "prior_mean", "prior_std", "truth", "policy"});
  IdentitySpec s;
  s.cfg.dim = opt_int(m, "model", "dim", 1);
  if (s.cfg.dim < 1) fail_field("model.dim", "must be >= 1");
  s.cfg.n_updates = n_updates;
  s.cfg.noise_std = opt_num(m, "model", "noise_std", 0.5);
  if (s.cfg.noise_std <= 0) fail_field("model.noise_std", "must be > 0");
  s.cfg.prior_mean = opt_vec(m, "model", "prior_mean", Eigen::VectorXd::Zero(s.cfg.dim));
  s.cfg.prior_std = opt_vec(m, "model", "prior_std", Eigen::VectorXd::Ones(s.cfg.dim));
  if (s.cfg.prior_mean.size() != s.cfg.dim) fail_field("model.prior_mean", "length != dim");
  if (s.cfg.prior_std.size() != s.cfg.dim) fail_field("model.prior_std", "length != dim");
  if ((s.cfg.prior_std.array() <= 0).any()) fail_field("model.prior_std", "entries must be > 0");
  s.truth = opt_vec(m, "model", "truth", Eigen::VectorXd::Ones(s.cfg.dim));
  if (s.truth.size() != s.cfg.dim) fail_field("model.truth", "length != dim");
  const std::string policy = opt_str(m, "model", "policy", "exact");
  if (policy == "exact")
    s.cfg.policy = GermPolicy::Exact;
  else if (policy == "regauss")
    s.cfg.policy = GermPolicy::Regauss;
  else
    fail_field("model.policy", "expected 'exact' or 'regauss'");
  return s;
}

struct CubicSpec {
  CubicUpdateConfig cfg;
  double truth = 1.2;
  std::optional<double> y_obs;
};

CubicSpec parse_cubic(const json& m) {
  check_keys(m, "model", {"name", "prior_mean", "prior_std", "noise_std", "truth", "y_obs"});
  CubicSpec s;
  s.cfg.prior_mean = opt_num(m, "model", "prior_mean", 0.0);
  s.cfg.prior_std = opt_num(m, "model", "prior_std", 1.0);
  if (s.cfg.prior_std <= 0) fail_field("model.prior_std", "must be > 0");
  s.cfg.noise_std = opt_num(m, "model", "noise_std", 1.0);
  if (s.cfg.noise_std <= 0) fail_field("model.noise_std", "must be > 0");
  s.truth = opt_num(m, "model", "truth", 1.2);
  if (const json* y = find_member(m, "y_obs")) s.y_obs = as_num(*y, "model.y_obs");
  return s;
}

Lorenz84Config parse_lorenz(const json& m, int n_updates, const SurrogateSpec& surr) {
  check_keys(m, "model",
             {"name", "window_days", "h_days", "noise_std", "init_mean", "init_std",
              "spinup_days"});
  if (surr.route != "projection")
    fail_field("surrogate.route",
               "lorenz84 propagation re-projects node solves; only 'projection' is supported");
  Lorenz84Config c;
  c.n_windows = n_updates;
  c.window_days = opt_num(m, "model", "window_days", c.window_days);
  c.h_days = opt_num(m, "model", "h_days", c.h_days);
  if (c.window_days <= 0 || c.h_days <= 0)
    fail_field("model.window_days", "window_days and h_days must be > 0");
  c.noise_std = opt_num(m, "model", "noise_std", c.noise_std);
  if (c.noise_std <= 0) fail_field("model.noise_std", "must be > 0");
  const Eigen::VectorXd im = opt_vec(m, "model", "init_mean", c.init_mean);
  if (im.size() != 3) fail_field("model.init_mean", "length must be 3");
  c.init_mean = im;
  c.init_std = opt_num(m, "model", "init_std", c.init_std);
  if (c.init_std <= 0) fail_field("model.init_std", "must be > 0");
  c.spinup_days = opt_num(m, "model", "spinup_days", c.spinup_days);
  if (c.spinup_days < 0) fail_field("model.spinup_days", "must be >= 0");
  c.degree = surr.degree;
  c.quad_points = surr.points_per_dim;
  return c;
}

struct DiffusionSpec {
  DiffusionConfig cfg;
  Eigen::VectorXd truth;
};

DiffusionSpec parse_diffusion(const json& m, int n_updates, const SurrogateSpec& surr) {
  check_keys(m, "model",
             {"name", "n_cells", "n_modes", "n_patches", "noise_std", "prior_std", "truth"});
  DiffusionSpec s;
  s.cfg.n_cells = opt_int(m, "model", "n_cells", s.cfg.n_cells);
  s.cfg.n_modes = opt_int(m, "model", "n_modes", s.cfg.n_modes);
  s.cfg.n_patches = opt_int(m, "model", "n_patches", s.cfg.n_patches);
  s.cfg.n_updates = n_updates;
  s.cfg.noise_std = opt_num(m, "model", "noise_std", s.cfg.noise_std);
  s.cfg.prior_std = opt_num(m, "model", "prior_std", s.cfg.prior_std);
  if (s.cfg.noise_std <= 0) fail_field("model.noise_std", "must be > 0");
  if (s.cfg.prior_std <= 0) fail_field("model.prior_std", "must be > 0");
  s.cfg.degree = surr.degree;
  s.cfg.quad_points = surr.points_per_dim;
  s.cfg.route = route_of(surr);
  Eigen::VectorXd dflt(s.cfg.n_modes);
  const double cycle[3] = {0.3, -0.4, 0.2};
  for (int i = 0; i < s.cfg.n_modes; ++i) dflt[i] = cycle[i % 3];
  s.truth = opt_vec(m, "model", "truth", dflt);
  if (s.truth.size() != s.cfg.n_modes) fail_field("model.truth", "length != n_modes");
  return s;
}

// --- artifact writers --------------------------------------------------------

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw ConfigError("config error at out_dir: cannot write " + p.string());
  return os;
}

void write_updates_csv(const std::filesystem::path& p,
                       const std::vector<UpdateRecord>& updates) {
  std::ofstream os = open_out(p);
  if (updates.empty()) return;
  const Eigen::Index d = updates.front().mean.size();
  const Eigen::Index m = updates.front().y_obs.size();
  os << "step";
  for (Eigen::Index i = 0; i < m; ++i) os << ",y_obs_" << i;
  for (Eigen::Index i = 0; i < d; ++i) os << ",mean_" << i;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) os << ",cov_" << i << "_" << k;
  os << ",pre_trace,post_trace,gain_rank\n";
  for (const UpdateRecord& u : updates) {
    os << u.step;
    for (Eigen::Index i = 0; i < m; ++i) os << ',' << format_double(u.y_obs[i]);
    for (Eigen::Index i = 0; i < d; ++i) os << ',' << format_double(u.mean[i]);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index k = 0; k < d; ++k) os << ',' << format_double(u.cov(i, k));
    os << ',' << format_double(u.pre_trace) << ',' << format_double(u.post_trace) << ','
       << u.gain_rank << '\n';
  }
}

/// One grid/pdf column pair per component; a degenerate (zero-spread)
/// component gets a constant grid with zero density.
void write_kde_csv(const std::filesystem::path& p, const Eigen::MatrixXd& samples) {
  std::ofstream os = open_out(p);
  const Eigen::Index d = samples.rows();
  const Eigen::Index n = 256;
  Eigen::MatrixXd grid(n, d), pdf(n, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const Eigen::VectorXd row = samples.row(c).transpose();
    try {
      grid.col(c) = kde_default_grid(row, n);
      pdf.col(c) = kde_pdf(row, grid.col(c));
    } catch (const std::exception&) {
      grid.col(c).setConstant(row.size() > 0 ? row[0] : 0.0);
      pdf.col(c).setZero();
    }
  }
  for (Eigen::Index c = 0; c < d; ++c)
    os << (c ? "," : "") << "grid_" << c << ",pdf_" << c;
  os << '\n';
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c)
      os << (c ? "," : "") << format_double(grid(r, c)) << ',' << format_double(pdf(r, c));
    os << '\n';
  }
}

ojson vec_json(const Eigen::VectorXd& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ojson mat_json(const Eigen::MatrixXd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

ojson updates_json(const std::vector<UpdateRecord>& updates) {
  ojson a = ojson::array();
  for (const UpdateRecord& u : updates) {
    ojson e;
    e["step"] = u.step;
    e["y_obs"] = vec_json(u.y_obs);
    e["mean"] = vec_json(u.mean);
    e["pre_trace"] = u.pre_trace;
    e["post_trace"] = u.post_trace;
    e["gain_rank"] = u.gain_rank;
    a.push_back(std::move(e));
  }
  return a;
}

// --- run outcomes ------------------------------------------------------------

struct RunOutcome {
  std::vector<UpdateRecord> updates;
  Eigen::VectorXd post_mean;
  Eigen::MatrixXd post_cov;
  Eigen::MatrixXd final_samples;  // D x S, drawn from the actual posterior object
  ojson extra;                    // oracle / residuals / rmse blocks for the summary
};

UpdateRecord make_record(int step, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                         double pre, const Eigen::VectorXd& y_obs, int rank) {
  UpdateRecord r;
  r.step = step;
  r.mean = mean;
  r.cov = cov;
  r.pre_trace = pre;
  r.post_trace = cov.trace();
  r.y_obs = y_obs;
  r.gain_rank = rank;
  return r;
}

ojson oracle_json(const models::BayesOracle1d& o, double posterior_mean) {
  ojson e;
  e["mean"] = o.mean;
  e["variance"] = o.variance;
  e["norm_const"] = o.norm_const;
  e["mean_distance"] = std::abs(posterior_mean - o.mean);
  return e;
}

std::function<double(double)> gaussian_pdf(double mu, double sigma) {
  return [mu, sigma](double t) {
    const double u = (t - mu) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
  };
}

RunOutcome run_identity(const IdentitySpec& spec, const FilterSpec& filter,
                        const SurrogateSpec& surr, std::uint64_t seed) {
  RunOutcome out;
  Rng kde_rng = Rng(seed).fork(kKdeStream);
  if (filter.kind == "spkf") {
    SequentialResult r = run_identity_spkf(spec.cfg, spec.truth, Rng(seed));
    out.updates = std::move(r.updates);
    out.post_mean = mean(r.posterior);
    out.post_cov = covariance(r.posterior);
    out.final_samples = sample(r.posterior, kKdeSamples, kde_rng);
  } else if (filter.kind == "enkf") {
    EnsembleSequentialResult r =
        run_identity_enkf(spec.cfg, filter.ensemble_size, spec.truth, Rng(seed));
    out.updates = std::move(r.updates);
    out.post_mean = ensemble_mean(r.posterior);
    out.post_cov = ensemble_covariance(r.posterior);
    out.final_samples = r.posterior.members;
  } else {  // ce-filter: sequential higher-order updates with a Gaussian re-germ
    if (spec.cfg.policy != GermPolicy::Regauss)
      fail_field("model.policy",
                 "filter.kind=ce-filter keeps the germ dimension fixed; set policy='regauss'");
    const int d = spec.cfg.dim;
    Rng noise = Rng(seed).fork(1);
    PceVector x = gaussian_pce(spec.cfg.prior_mean, spec.cfg.prior_std.asDiagonal());
    const QuadratureRule joint = gauss_hermite_rule(2 * d, surr.points_per_dim);
    double last_residual = 0.0;
    for (int k = 0; k < spec.cfg.n_updates; ++k) {
      const PceVector eps = gaussian_pce(
          Eigen::VectorXd::Zero(d),
          spec.cfg.noise_std * Eigen::MatrixXd::Identity(d, d), x.germ_end());
      const PceVector z = assemble_z(x, eps);
      const Eigen::VectorXd y_obs =
          spec.truth + spec.cfg.noise_std * noise.normal_vector(d);
      const double pre = covariance(x).trace();
      const PosteriorRv p = ce_filter_update(x, z, y_obs, filter.order, joint);
      const Eigen::MatrixXd cov = covariance(p.fluctuation);
      out.updates.push_back(make_record(k + 1, p.mean, cov, pre, y_obs, 0));
      last_residual = map_residual(p.map, evaluate(x, joint.nodes),
                                   evaluate(z, joint.nodes), joint.weights);
      x = gaussian_pce(p.mean, sqrt_psd(cov));
    }
    out.post_mean = mean(x);
    out.post_cov = covariance(x);
    out.final_samples = sample(x, kKdeSamples, kde_rng);
    out.extra["residuals"]["map"] = last_residual;
  }
  if (spec.cfg.dim == 1) {
    // Sequential scalar oracle: fold each measurement into the prior density.
    // For the identity observation the Bayes posterior of a Gaussian prior
    // stays Gaussian, so chaining scalar oracles is exact.
    double mu = spec.cfg.prior_mean[0];
    double var = spec.cfg.prior_std[0] * spec.cfg.prior_std[0];
    const double nv = spec.cfg.noise_std * spec.cfg.noise_std;
    for (const UpdateRecord& u : out.updates) {
      mu = (mu * nv + u.y_obs[0] * var) / (nv + var);
      var = var * nv / (nv + var);
    }
    ojson e;
    e["mean"] = mu;
    e["variance"] = var;
    e["mean_distance"] = std::abs(out.post_mean[0] - mu);
    out.extra["oracle"] = std::move(e);
  }
  return out;
}

struct CubicProblem {
  PceVector x, z;
  QuadratureRule joint;
  double y_obs = 0.0;
};

CubicProblem build_cubic_problem(const CubicSpec& spec, const SurrogateSpec& surr,
                                 std::uint64_t seed) {
  CubicProblem pb;
  const double pm = spec.cfg.prior_mean, ps = spec.cfg.prior_std;
  pb.x = gaussian_pce(Eigen::VectorXd::Constant(1, pm),
                      Eigen::MatrixXd::Constant(1, 1, ps));
  const ForwardModel cube = models::cubic_model();
  const int pts = std::max(8, surr.points_per_dim);
  const QuadratureRule rule1 = gauss_hermite_rule(1, pts);
  const PceVector y = fit_projection(observation_map(cube, pb.x), rule1, hermite_basis(1, 3));
  const PceVector eps = gaussian_pce(Eigen::VectorXd::Zero(1),
                                     Eigen::MatrixXd::Constant(1, 1, spec.cfg.noise_std), 1);
  pb.z = assemble_z(y, eps);
  pb.joint = gauss_hermite_rule(2, pts);
  pb.y_obs = spec.y_obs ? *spec.y_obs
                        : spec.truth * spec.truth * spec.truth +
                              spec.cfg.noise_std * Rng(seed).fork(1).normal();
  return pb;
}

models::BayesOracle1d cubic_oracle(const CubicSpec& spec, double y_obs) {
  const double pm = spec.cfg.prior_mean, ps = spec.cfg.prior_std;
  const double half = spec.cfg.oracle_grid_halfwidth * ps;
  return models::bayes_oracle_1d(gaussian_pdf(pm, ps), [](double t) { return t * t * t; },
                                 y_obs, spec.cfg.noise_std, pm - half, pm + half, 1e-10);
}

RunOutcome run_cubic(const CubicSpec& spec, const FilterSpec& filter,
                     const SurrogateSpec& surr, std::uint64_t seed, int n_updates) {
  if (n_updates != 1)
    fail_field("n_updates", "the cubic experiment is a single-update study; set 1");
  CubicProblem pb = build_cubic_problem(spec, surr, seed);
  Rng kde_rng = Rng(seed).fork(kKdeStream);

  RunOutcome out;
  const Eigen::VectorXd yv = Eigen::VectorXd::Constant(1, pb.y_obs);
  const double pre = covariance(pb.x).trace();
  if (filter.kind == "spkf") {
    GainOperator gain;
    const PceVector xa = spkf_update(pb.x, pb.z, yv, &gain);
    out.post_mean = mean(xa);
    out.post_cov = covariance(xa);
    out.updates.push_back(make_record(1, out.post_mean, out.post_cov, pre, yv,
                                      gain.pinv_rank));
    out.final_samples = sample(xa, kKdeSamples, kde_rng);
  } else if (filter.kind == "ce-filter") {
    const PosteriorRv p = ce_filter_update(pb.x, pb.z, yv, filter.order, pb.joint);
    out.post_mean = p.mean;
    out.post_cov = covariance(p.fluctuation);
    out.updates.push_back(make_record(1, out.post_mean, out.post_cov, pre, yv, 0));
    out.final_samples =
        sample(p.fluctuation, kKdeSamples, kde_rng).colwise() + p.mean;
    out.extra["residuals"]["map"] =
        map_residual(p.map, evaluate(pb.x, pb.joint.nodes), evaluate(pb.z, pb.joint.nodes),
                     pb.joint.weights);
    out.extra["corrected_covariance"] =
        mat_json(corrected_covariance(pb.x, pb.z, yv, filter.order, pb.joint));
  } else {  // enkf
    Rng member_rng = Rng(seed).fork(kMemberStream);
    const Eigen::MatrixXd germ = member_rng.normal_matrix(2, filter.ensemble_size);
    Ensemble xf{evaluate(pb.x, germ), std::nullopt};
    Ensemble zf{evaluate(pb.z, germ), std::nullopt};
    GainOperator gain;
    const Ensemble xa = enkf_update(xf, zf, yv, &gain);
    out.post_mean = ensemble_mean(xa);
    out.post_cov = ensemble_covariance(xa);
    out.updates.push_back(make_record(1, out.post_mean, out.post_cov, pre, yv,
                                      gain.pinv_rank));
    out.final_samples = xa.members;
  }
  out.extra["oracle"] = oracle_json(cubic_oracle(spec, pb.y_obs), out.post_mean[0]);
  return out;
}

RunOutcome run_lorenz(const Lorenz84Config& cfg, const FilterSpec& filter,
                      std::uint64_t seed) {
  if (filter.kind != "spkf")
    fail_field("filter.kind", "lorenz84 supports only the spectral update (spkf)");
  Lorenz84Result r = run_lorenz84(cfg, Rng(seed));
  RunOutcome out;
  out.updates = std::move(r.updates);
  out.post_mean = mean(r.posterior);
  out.post_cov = covariance(r.posterior);
  Rng kde_rng = Rng(seed).fork(kKdeStream);
  out.final_samples = sample(r.posterior, kKdeSamples, kde_rng);
  return out;
}

RunOutcome run_diffusion_cli(const DiffusionSpec& spec, const FilterSpec& filter,
                             std::uint64_t seed) {
  if (filter.kind != "spkf")
    fail_field("filter.kind", "diffusion1d supports only the spectral update (spkf)");
  DiffusionResult r = run_diffusion(spec.cfg, spec.truth, Rng(seed));
  RunOutcome out;
  out.updates = std::move(r.updates);
  out.post_mean = mean(r.posterior);
  out.post_cov = covariance(r.posterior);
  Rng kde_rng = Rng(seed).fork(kKdeStream);
  out.final_samples = sample(r.posterior, kKdeSamples, kde_rng);
  ojson rmse = ojson::array();
  for (double v : r.rmse) rmse.push_back(v);
  out.extra["rmse"] = std::move(rmse);
  return out;
}

// --- config echo -------------------------------------------------------------

ojson echo_filter(const FilterSpec& f) {
  ojson e;
  e["kind"] = f.kind;
  if (f.kind == "ce-filter") e["order"] = f.order;
  if (f.kind == "enkf") e["ensemble_size"] = f.ensemble_size;
  return e;
}

ojson echo_model(const CommonSpec& c) {
  ojson m;
  m["name"] = c.model_name;
  if (c.model_name == "identity") {
    const IdentitySpec s = parse_identity(c.model, c.n_updates);
    m["dim"] = s.cfg.dim;
    m["noise_std"] = s.cfg.noise_std;
    m["prior_mean"] = vec_json(s.cfg.prior_mean);
    m["prior_std"] = vec_json(s.cfg.prior_std);
    m["truth"] = vec_json(s.truth);
    m["policy"] = s.cfg.policy == GermPolicy::Exact ? "exact" : "regauss";
  } else if (c.model_name == "cubic") {
    const CubicSpec s = parse_cubic(c.model);
    m["prior_mean"] = s.cfg.prior_mean;
    m["prior_std"] = s.cfg.prior_std;
    m["noise_std"] = s.cfg.noise_std;
    m["truth"] = s.truth;
    if (s.y_obs) m["y_obs"] = *s.y_obs;
  } else if (c.model_name == "lorenz84") {
    const Lorenz84Config s = parse_lorenz(c.model, c.n_updates, c.surrogate);
    m["window_days"] = s.window_days;
    m["h_days"] = s.h_days;
    m["noise_std"] = s.noise_std;
    m["init_mean"] = vec_json(s.init_mean);
    m["init_std"] = s.init_std;
    m["spinup_days"] = s.spinup_days;
  } else {
    const DiffusionSpec s = parse_diffusion(c.model, c.n_updates, c.surrogate);
    m["n_cells"] = s.cfg.n_cells;
    m["n_modes"] = s.cfg.n_modes;
    m["n_patches"] = s.cfg.n_patches;
    m["noise_std"] = s.cfg.noise_std;
    m["prior_std"] = s.cfg.prior_std;
    m["truth"] = vec_json(s.truth);
  }
  return m;
}

ojson echo_config(const CommonSpec& c, const std::vector<FilterSpec>& filters,
                  bool compare_mode) {
  ojson e;
  e["model"] = echo_model(c);
  ojson surr;
  surr["route"] = c.surrogate.route;
  surr["degree"] = c.surrogate.degree;
  surr["points_per_dim"] = c.surrogate.points_per_dim;
  e["surrogate"] = std::move(surr);
  if (compare_mode) {
    ojson fl = ojson::array();
    for (const FilterSpec& f : filters) fl.push_back(echo_filter(f));
    e["filters"] = std::move(fl);
  } else {
    e["filter"] = echo_filter(filters.front());
  }
  e["n_updates"] = c.n_updates;
  e["seed"] = c.seed;
  e["out_dir"] = c.out_dir;
  return e;
}

// --- subcommand drivers ------------------------------------------------------

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config error: cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("config error: " + path + " is not valid JSON (" +
                      std::string(e.what()) + ")");
  }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

int do_run(const std::string& config_path, const CliOverrides& ov) {
  const auto t0 = std::chrono::steady_clock::now();
  const json cfg = load_config(config_path);
  const CommonSpec c = parse_common(cfg, ov, /*compare_mode=*/false);
  const FilterSpec filter =
      parse_filter(require_member(cfg, "(top level)", "filter"), "filter");

  RunOutcome out;
  const auto t_run = std::chrono::steady_clock::now();
  if (c.model_name == "identity") {
    out = run_identity(parse_identity(c.model, c.n_updates), filter, c.surrogate, c.seed);
  } else if (c.model_name == "cubic") {
    out = run_cubic(parse_cubic(c.model), filter, c.surrogate, c.seed, c.n_updates);
  } else if (c.model_name == "lorenz84") {
    out = run_lorenz(parse_lorenz(c.model, c.n_updates, c.surrogate), filter, c.seed);
  } else if (c.model_name == "diffusion1d") {
    out = run_diffusion_cli(parse_diffusion(c.model, c.n_updates, c.surrogate), filter,
                            c.seed);
  } else {
    fail_field("model.name", "unknown model '" + c.model_name +
                                 "' (expected identity | cubic | lorenz84 | diffusion1d)");
  }
  const double run_ms = ms_since(t_run);

  const auto t_art = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  if (ec) throw ConfigError("config error at out_dir: cannot create " + c.out_dir);
  const std::filesystem::path dir(c.out_dir);
  std::vector<std::string> files;

  write_updates_csv(dir / "updates.csv", out.updates);
  files.push_back("updates.csv");

  // Per-update marginals from the recorded moments (the sequential runners
  // re-gauss between updates, so these moments are the full per-update
  // description); the final file is drawn from the actual posterior object.
  Rng kde_rng = Rng(c.seed).fork(kKdeStream + 1);
  for (const UpdateRecord& u : out.updates) {
    const Eigen::MatrixXd draw =
        (sqrt_psd(u.cov) * kde_rng.normal_matrix(u.mean.size(), kKdeSamples)).colwise() +
        u.mean;
    char name[48];
    std::snprintf(name, sizeof name, "kde_update_%02d.csv", u.step);
    write_kde_csv(dir / name, draw);
    files.emplace_back(name);
  }
  write_kde_csv(dir / "kde_final.csv", out.final_samples);
  files.push_back("kde_final.csv");

  ojson summary;
  summary["config"] = echo_config(c, {filter}, false);
  summary["updates"] = updates_json(out.updates);
  summary["posterior"]["mean"] = vec_json(out.post_mean);
  summary["posterior"]["cov"] = mat_json(out.post_cov);
  for (auto& [k, v] : out.extra.items()) summary[k] = v;
  ojson timings;
  timings["run_ms"] = run_ms;
  timings["artifacts_ms"] = ms_since(t_art);
  timings["total_ms"] = ms_since(t0);
  summary["timings"] = std::move(timings);
  ojson fl = ojson::array();
  for (const std::string& f : files) fl.push_back(f);
  fl.push_back("summary.json");
  summary["files"] = std::move(fl);
  open_out(dir / "summary.json") << summary.dump(2) << '\n';

  if (!c.quiet) {
    for (const UpdateRecord& u : out.updates)
      std::printf("update %2d: trace %.6g -> %.6g\n", u.step, u.pre_trace, u.post_trace);
    std::printf("wrote %s\n", (dir / "summary.json").string().c_str());
  }
  return 0;
}

struct CompareRow {
  FilterSpec filter;
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  double oracle_distance = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
};

int do_compare(const std::string& config_path, const CliOverrides& ov) {
  const auto t0 = std::chrono::steady_clock::now();
  const json cfg = load_config(config_path);
  const CommonSpec c = parse_common(cfg, ov, /*compare_mode=*/true);
  const json& fl = require_member(cfg, "(top level)", "filters");
  if (!fl.is_array() || fl.empty()) fail_field("filters", "expected a non-empty array");
  std::vector<FilterSpec> filters;
  for (std::size_t i = 0; i < fl.size(); ++i)
    filters.push_back(parse_filter(fl[i], "filters[" + std::to_string(i) + "]"));
  if (c.n_updates != 1)
    fail_field("n_updates", "compare runs a single shared update; set 1");

  // Shared problem: the same prior, prediction, and measurement for every
  // filter in the list.
  PceVector x, z;
  QuadratureRule joint;
  Eigen::VectorXd y_obs;
  std::optional<models::BayesOracle1d> oracle;
  if (c.model_name == "identity") {
    const IdentitySpec s = parse_identity(c.model, 1);
    const int d = s.cfg.dim;
    x = gaussian_pce(s.cfg.prior_mean, s.cfg.prior_std.asDiagonal());
    const PceVector eps = gaussian_pce(
        Eigen::VectorXd::Zero(d), s.cfg.noise_std * Eigen::MatrixXd::Identity(d, d), d);
    z = assemble_z(x, eps);
    joint = gauss_hermite_rule(2 * d, std::max(8, c.surrogate.points_per_dim));
    y_obs = s.truth + s.cfg.noise_std * Rng(c.seed).fork(1).normal_vector(d);
    if (d == 1) {
      const double pm = s.cfg.prior_mean[0], ps = s.cfg.prior_std[0];
      oracle = models::bayes_oracle_1d(gaussian_pdf(pm, ps), [](double t) { return t; },
                                       y_obs[0], s.cfg.noise_std, pm - 10 * ps,
                                       pm + 10 * ps, 1e-10);
    }
  } else if (c.model_name == "cubic") {
    const CubicSpec s = parse_cubic(c.model);
    CubicProblem pb = build_cubic_problem(s, c.surrogate, c.seed);
    x = std::move(pb.x);
    z = std::move(pb.z);
    joint = std::move(pb.joint);
    y_obs = Eigen::VectorXd::Constant(1, pb.y_obs);
    oracle = cubic_oracle(s, pb.y_obs);
  } else {
    fail_field("model.name", "compare supports the identity and cubic models");
  }

  std::vector<CompareRow> rows;
  for (std::size_t i = 0; i < filters.size(); ++i) {
    const FilterSpec& f = filters[i];
    CompareRow row;
    row.filter = f;
    if (f.kind == "spkf") {
      const PceVector xa = spkf_update(x, z, y_obs);
      row.mean = mean(xa);
      row.var = covariance(xa).diagonal();
    } else if (f.kind == "ce-filter") {
      const PosteriorRv p = ce_filter_update(x, z, y_obs, f.order, joint);
      row.mean = p.mean;
      row.var = covariance(p.fluctuation).diagonal();
      row.residual = map_residual(p.map, evaluate(x, joint.nodes), evaluate(z, joint.nodes),
                                  joint.weights);
    } else {
      Rng member_rng = Rng(c.seed).fork(kMemberStream + i);
      const Eigen::MatrixXd germ = member_rng.normal_matrix(z.germ_end(), f.ensemble_size);
      Ensemble xf{evaluate(x, germ), std::nullopt};
      Ensemble zf{evaluate(z, germ), std::nullopt};
      const Ensemble xa = enkf_update(xf, zf, y_obs);
      row.mean = ensemble_mean(xa);
      row.var = ensemble_covariance(xa).diagonal();
    }
    if (oracle) row.oracle_distance = std::abs(row.mean[0] - oracle->mean);
    rows.push_back(std::move(row));
  }

  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  if (ec) throw ConfigError("config error at out_dir: cannot create " + c.out_dir);
  const std::filesystem::path dir(c.out_dir);

  const Eigen::Index d = rows.front().mean.size();
  {
    std::ofstream os = open_out(dir / "comparison.csv");
    os << "filter,order,ensemble_size";
    for (Eigen::Index k = 0; k < d; ++k) os << ",mean_" << k;
    for (Eigen::Index k = 0; k < d; ++k) os << ",var_" << k;
    os << ",oracle_distance,map_residual\n";
    for (const CompareRow& r : rows) {
      os << r.filter.kind << ','
         << (r.filter.kind == "ce-filter" ? std::to_string(r.filter.order) : "") << ','
         << (r.filter.kind == "enkf" ? std::to_string(r.filter.ensemble_size) : "");
      for (Eigen::Index k = 0; k < d; ++k) os << ',' << format_double(r.mean[k]);
      for (Eigen::Index k = 0; k < d; ++k) os << ',' << format_double(r.var[k]);
      os << ',' << (std::isnan(r.oracle_distance) ? "" : format_double(r.oracle_distance))
         << ',' << (std::isnan(r.residual) ? "" : format_double(r.residual)) << '\n';
    }
  }

  ojson summary;
  summary["config"] = echo_config(c, filters, true);
  summary["y_obs"] = vec_json(y_obs);
  ojson rj = ojson::array();
  for (const CompareRow& r : rows) {
    ojson e;
    e["filter"] = echo_filter(r.filter);
    e["mean"] = vec_json(r.mean);
    e["var"] = vec_json(r.var);
    if (!std::isnan(r.oracle_distance)) e["oracle_distance"] = r.oracle_distance;
    if (!std::isnan(r.residual)) e["map_residual"] = r.residual;
    rj.push_back(std::move(e));
  }
  summary["results"] = std::move(rj);
  if (oracle) summary["oracle"] = oracle_json(*oracle, rows.front().mean[0]);
  summary["timings"]["total_ms"] = ms_since(t0);
  summary["files"] = ojson::array({"comparison.csv", "summary.json"});
  open_out(dir / "summary.json") << summary.dump(2) << '\n';

  if (!c.quiet) {
    for (const CompareRow& r : rows)
      std::printf("%-10s mean %.8g%s\n", r.filter.kind.c_str(), r.mean[0],
                  std::isnan(r.oracle_distance)
                      ? ""
                      : ("  |mean - oracle| = " + format_double(r.oracle_distance)).c_str());
    std::printf("wrote %s\n", (dir / "summary.json").string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauss-Markov-Kalman filter experiment runner"};
  app.require_subcommand(1);

  std::string run_cfg, cmp_cfg;
  CliOverrides run_ov, cmp_ov;
  std::uint64_t run_seed = 0, cmp_seed = 0;
  std::string run_dir, cmp_dir;

  CLI::App* run = app.add_subcommand("run", "Run one experiment from a JSON config");
  run->add_option("config", run_cfg, "Path to the experiment config (JSON)")->required();
  CLI::Option* run_seed_opt = run->add_option("--seed", run_seed, "Override the RNG seed");
  CLI::Option* run_dir_opt =
      run->add_option("--out-dir", run_dir, "Override the output directory");
  run->add_flag("--quiet", run_ov.quiet, "Suppress progress output");

  CLI::App* cmp =
      app.add_subcommand("compare", "Run several filters on identical data and tabulate");
  cmp->add_option("config", cmp_cfg, "Path to the comparison config (JSON)")->required();
  CLI::Option* cmp_seed_opt = cmp->add_option("--seed", cmp_seed, "Override the RNG seed");
  CLI::Option* cmp_dir_opt =
      cmp->add_option("--out-dir", cmp_dir, "Override the output directory");
  cmp->add_flag("--quiet", cmp_ov.quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // bad flags/arguments are config errors
  }

  try {
    if (run->parsed()) {
      if (run_seed_opt->count() > 0) run_ov.seed = run_seed;
      if (run_dir_opt->count() > 0) run_ov.out_dir = run_dir;
      return do_run(run_cfg, run_ov);
    }
    if (cmp_seed_opt->count() > 0) cmp_ov.seed = cmp_seed;
    if (cmp_dir_opt->count() > 0) cmp_ov.out_dir = cmp_dir;
    return do_compare(cmp_cfg, cmp_ov);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
}
