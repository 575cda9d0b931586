#include "gmkf/serialize.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gmkf {

namespace {

std::string rule_name(Truncation t) {
  switch (t) {
    case Truncation::TotalDegree: return "total_degree";
    case Truncation::TensorDegree: return "tensor_degree";
    case Truncation::Custom: return "custom";
  }
  throw std::logic_error("rule_name: unknown truncation");
}

Truncation rule_from_name(const std::string& s) {
  if (s == "total_degree") return Truncation::TotalDegree;
  if (s == "tensor_degree") return Truncation::TensorDegree;
  if (s == "custom") return Truncation::Custom;
  throw std::invalid_argument("index set: unknown truncation rule '" + s + "'");
}

} // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix: expected a list of rows");
  const auto R = static_cast<Eigen::Index>(j.size());
  if (R == 0) return {};
  const auto C = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(R, C);
  for (Eigen::Index r = 0; r < R; ++r) {
    const auto& row = j.at(r);
    if (static_cast<Eigen::Index>(row.size()) != C)
      throw std::invalid_argument("matrix: ragged rows");
    for (Eigen::Index c = 0; c < C; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

json to_json(const MultiIndexSet& set) {
  json j;
  j["dim"] = set.dim;
  j["degree"] = set.degree;
  j["rule"] = rule_name(set.rule);
  json idx = json::array();
  for (const auto& alpha : set.indices) idx.push_back(alpha);
  j["indices"] = std::move(idx);
  return j;
}

MultiIndexSet index_set_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const int degree = j.at("degree").get<int>();
  const Truncation rule = rule_from_name(j.at("rule").get<std::string>());

  std::vector<MultiIndex> indices;
  for (const auto& row : j.at("indices")) indices.push_back(row.get<MultiIndex>());
  MultiIndexSet set = custom_index_set(dim, std::move(indices));

  if (rule != Truncation::Custom) {
    // Validate the explicit list against what the rule would generate.
    const MultiIndexSet ref = build_index_set(dim, degree, rule);
    if (ref.indices != set.indices)
      throw std::invalid_argument("index set: indices do not match dim/degree/rule");
    return ref;
  }
  return set;
}

json to_json(const QuadratureRule& rule) {
  json j;
  j["dim"] = rule.dim;
  j["points_per_dim"] = rule.points_per_dim;
  json nodes = json::array();
  for (Eigen::Index s = 0; s < rule.size(); ++s) {
    json pt = json::array();
    for (int k = 0; k < rule.dim; ++k) pt.push_back(rule.nodes(k, s));
    nodes.push_back(std::move(pt));
  }
  j["nodes"] = std::move(nodes);
  json w = json::array();
  for (Eigen::Index s = 0; s < rule.size(); ++s) w.push_back(rule.weights[s]);
  j["weights"] = std::move(w);
  return j;
}

QuadratureRule rule_from_json(const json& j) {
  QuadratureRule rule;
  rule.dim = j.at("dim").get<int>();
  rule.points_per_dim = j.at("points_per_dim").get<int>();
  const auto& nodes = j.at("nodes");
  const auto& weights = j.at("weights");
  if (nodes.size() != weights.size())
    throw std::invalid_argument("quadrature rule: node/weight count mismatch");
  const auto S = static_cast<Eigen::Index>(nodes.size());
  rule.nodes.resize(rule.dim, S);
  rule.weights.resize(S);
  double total = 0.0;
  for (Eigen::Index s = 0; s < S; ++s) {
    const auto& pt = nodes.at(s);
    if (static_cast<int>(pt.size()) != rule.dim)
      throw std::invalid_argument("quadrature rule: node dimension mismatch");
    for (int k = 0; k < rule.dim; ++k) rule.nodes(k, s) = pt.at(k).get<double>();
    rule.weights[s] = weights.at(s).get<double>();
    if (!(rule.weights[s] > 0.0))
      throw std::invalid_argument("quadrature rule: weights must be positive");
    total += rule.weights[s];
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("quadrature rule: weights must sum to one");
  return rule;
}

json to_json(const HermiteBasis& basis) {
  json j;
  j["dim"] = basis.dim();
  j["degree"] = basis.set.degree;
  j["normalized"] = basis.normalized;
  j["rule"] = rule_name(basis.set.rule);
  if (basis.set.rule == Truncation::Custom) {
    json idx = json::array();
    for (const auto& alpha : basis.set.indices) idx.push_back(alpha);
    j["indices"] = std::move(idx);
  }
  return j;
}

HermiteBasis basis_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const int degree = j.at("degree").get<int>();
  const Truncation rule =
      j.contains("rule") ? rule_from_name(j.at("rule").get<std::string>())
                         : Truncation::TotalDegree;
  HermiteBasis basis;
  basis.normalized = j.value("normalized", true);
  if (rule == Truncation::Custom) {
    std::vector<MultiIndex> indices;
    for (const auto& row : j.at("indices")) indices.push_back(row.get<MultiIndex>());
    basis.set = custom_index_set(dim, std::move(indices));
  } else {
    basis.set = build_index_set(dim, degree, rule);
  }
  return basis;
}

json to_json(const PceVector& v) {
  json j;
  j["basis"] = to_json(v.basis);
  j["germ_offset"] = v.germ_offset;
  j["coeffs"] = matrix_to_json(v.coeffs);
  return j;
}

PceVector pce_from_json(const json& j) {
  PceVector v;
  v.basis = basis_from_json(j.at("basis"));
  v.germ_offset = j.at("germ_offset").get<int>();
  v.coeffs = matrix_from_json(j.at("coeffs"));
  validate(v, "pce_from_json");
  return v;
}

json to_json(const GainOperator& g) {
  json j;
  j["K"] = matrix_to_json(g.K);
  j["C_xz"] = matrix_to_json(g.C_xz);
  j["C_z"] = matrix_to_json(g.C_z);
  j["pinv_rank"] = g.pinv_rank;
  return j;
}

GainOperator gain_from_json(const json& j) {
  GainOperator g;
  g.K = matrix_from_json(j.at("K"));
  g.C_xz = matrix_from_json(j.at("C_xz"));
  g.C_z = matrix_from_json(j.at("C_z"));
  g.pinv_rank = j.at("pinv_rank").get<int>();
  return g;
}

json to_json(const PolynomialMap& m) {
  json j;
  j["degree"] = m.features.degree;
  j["input_dim"] = m.features.dim;
  j["output_dim"] = m.output_dim();
  json feats = json::array();
  for (const auto& g : m.features.indices) feats.push_back(g);
  j["features"] = std::move(feats);
  j["coeffs"] = matrix_to_json(m.coeffs);
  return j;
}

PolynomialMap map_from_json(const json& j) {
  PolynomialMap m;
  std::vector<MultiIndex> feats;
  for (const auto& row : j.at("features")) feats.push_back(row.get<MultiIndex>());
  m.features = custom_index_set(j.at("input_dim").get<int>(), std::move(feats));
  m.coeffs = matrix_from_json(j.at("coeffs"));
  if (m.coeffs.cols() != m.features.size())
    throw std::invalid_argument("polynomial map: coefficient/feature count mismatch");
  if (m.coeffs.rows() != j.at("output_dim").get<Eigen::Index>())
    throw std::invalid_argument("polynomial map: output dimension mismatch");
  return m;
}

void write_ensemble_csv(std::ostream& os, const Ensemble& e,
                        const std::vector<std::string>& names) {
  const Eigen::Index D = e.dim();
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != D)
    throw std::invalid_argument("write_ensemble_csv: name count mismatch");
  for (Eigen::Index d = 0; d < D; ++d) {
    if (d) os << ',';
    if (names.empty())
      os << 'x' << d;
    else
      os << names[d];
  }
  os << '\n';
  for (Eigen::Index s = 0; s < e.size(); ++s) {
    for (Eigen::Index d = 0; d < D; ++d) {
      if (d) os << ',';
      os << format_double(e.members(d, s));
    }
    os << '\n';
  }
}

Ensemble read_ensemble_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("ensemble csv: empty input");

  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  const auto header = split(line);
  const auto D = static_cast<Eigen::Index>(header.size());
  if (D == 0) throw std::invalid_argument("ensemble csv: empty header");

  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (static_cast<Eigen::Index>(cells.size()) != D)
      throw std::invalid_argument("ensemble csv: row width does not match the header");
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) row[i] = std::stod(cells[i]);
    rows.push_back(std::move(row));
  }

  Ensemble e;
  e.members.resize(D, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (Eigen::Index d = 0; d < D; ++d) e.members(d, static_cast<Eigen::Index>(s)) = rows[s][d];
  return e;
}

} // namespace gmkf
