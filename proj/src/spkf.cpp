#include "gmkf/spkf.hpp"

#include <stdexcept>

namespace gmkf {

PceVector assemble_z(const PceVector& y, const PceVector& eps) {
  validate(y, "assemble_z");
  validate(eps, "assemble_z");
  if (y.dim() != eps.dim())
    throw std::invalid_argument("assemble_z: observation and noise dimension mismatch");
  if (y.basis.normalized != eps.basis.normalized)
    throw std::invalid_argument("assemble_z: mixed basis normalization conventions");
  const bool disjoint =
      eps.germ_offset >= y.germ_end() || eps.germ_end() <= y.germ_offset;
  if (!disjoint)
    throw std::invalid_argument("assemble_z: noise germ block overlaps the observation germ");

  const MultiIndexSet joint =
      union_embedded(y.basis.set, y.germ_offset, eps.basis.set, eps.germ_offset);
  PceVector ye = embed_on(y, joint);
  const PceVector ee = embed_on(eps, joint);
  ye.coeffs += ee.coeffs;
  return ye;
}

PceVector spkf_update(const PceVector& x_f, const PceVector& z,
                      const Eigen::VectorXd& y_obs, GainOperator* gain_out,
                      double pinv_rel_tol) {
  validate(x_f, "spkf_update");
  validate(z, "spkf_update");
  if (y_obs.size() != z.dim())
    throw std::invalid_argument("spkf_update: measurement dimension != z dimension");
  if (x_f.basis.normalized != z.basis.normalized)
    throw std::invalid_argument("spkf_update: mixed basis normalization conventions");
  if (z.germ_offset != 0 || x_f.germ_end() > z.germ_end())
    throw std::invalid_argument(
        "spkf_update: germ layout mismatch (z must span the joint germ, starting at 0)");

  GainOperator gain = kalman_gain(covariance(x_f, z), covariance(z), pinv_rel_tol);

  const MultiIndexSet joint =
      union_embedded(x_f.basis.set, x_f.germ_offset, z.basis.set, z.germ_offset);
  PceVector xa = embed_on(x_f, joint);
  const PceVector ze = embed_on(z, joint);

  // Coefficientwise linear update: the innovation only enters the constant
  // term; every fluctuation term is damped by -K z_alpha.
  for (int t = 0; t < joint.size(); ++t) {
    if (total_degree(joint.indices[t]) == 0)
      xa.coeffs.col(t) += gain.K * (y_obs - ze.coeffs.col(t));
    else
      xa.coeffs.col(t) -= gain.K * ze.coeffs.col(t);
  }

  if (gain_out) *gain_out = std::move(gain);
  return xa;
}

} // namespace gmkf
