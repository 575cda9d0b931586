#pragma once

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "gmkf/ensemble.hpp"
#include "gmkf/gain.hpp"
#include "gmkf/polynomial_map.hpp"
#include "gmkf/quadrature.hpp"

namespace gmkf {

using json = nlohmann::json;

// JSON converters.  Readers validate shape invariants (index counts against
// dim/degree/rule, weight positivity, coefficient table shape) and throw
// std::invalid_argument on violations.

json to_json(const MultiIndexSet& set);
MultiIndexSet index_set_from_json(const json& j);

json to_json(const QuadratureRule& rule);
QuadratureRule rule_from_json(const json& j);

json to_json(const HermiteBasis& basis);
HermiteBasis basis_from_json(const json& j);

json to_json(const PceVector& v);
PceVector pce_from_json(const json& j);

json to_json(const GainOperator& g);
GainOperator gain_from_json(const json& j);

json to_json(const PolynomialMap& m);
PolynomialMap map_from_json(const json& j);

json matrix_to_json(const Eigen::MatrixXd& m); // list of rows
Eigen::MatrixXd matrix_from_json(const json& j);

// Ensemble CSV: header row with component names (x0, x1, ... by default),
// then one row per member, full double precision.
void write_ensemble_csv(std::ostream& os, const Ensemble& e,
                        const std::vector<std::string>& names = {});
Ensemble read_ensemble_csv(std::istream& is);

/// Shortest round-trip-exact decimal form of a double (%.17g).
std::string format_double(double x);

} // namespace gmkf
