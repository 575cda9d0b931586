#include "gmkf/forward_model.hpp"

#include <stdexcept>

namespace gmkf {

namespace {

Eigen::VectorXd params_at(const PceVector& params, const ParameterTransform& t,
                          const Eigen::VectorXd& xi) {
  const Eigen::MatrixXd x = evaluate(params, xi);
  return transform_inverse(t, Eigen::VectorXd(x.col(0)));
}

} // namespace

GermMap observation_map(const ForwardModel& model, const PceVector& params,
                        const ParameterTransform& t) {
  if (!model.solve || !model.observe)
    throw std::invalid_argument("observation_map: model needs solve and observe");
  if (params.germ_offset != 0)
    throw std::invalid_argument("observation_map: parameter PCE must start at germ offset 0");
  return [model, params, t](const Eigen::VectorXd& xi) {
    const Eigen::VectorXd p = params_at(params, t, xi);
    return model.observe(p, model.solve(p));
  };
}

GermMap state_map(const ForwardModel& model, const PceVector& params,
                  const ParameterTransform& t) {
  if (!model.solve)
    throw std::invalid_argument("state_map: model needs solve");
  if (params.germ_offset != 0)
    throw std::invalid_argument("state_map: parameter PCE must start at germ offset 0");
  return [model, params, t](const Eigen::VectorXd& xi) {
    return model.solve(params_at(params, t, xi));
  };
}

} // namespace gmkf
