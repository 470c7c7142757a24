#include "fsi/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fsi/errors.hpp"
#include "fsi/mechanics.hpp"

namespace fsi {

std::pair<double, double> DeformationTrajectory::jacobian_range() const {
  double lo = 1e300, hi = -1e300;
  for (const auto& l : levels) {
    lo = std::min(lo, l.J.values.minCoeff());
    hi = std::max(hi, l.J.values.maxCoeff());
  }
  return {lo, hi};
}

Trajectory DeformationTrajectory::chi_trajectory() const {
  Trajectory tr;
  tr.t0 = t0;
  tr.dt = dt;
  for (const auto& l : levels) tr.levels.push_back(l.chi);
  return tr;
}

DeformationState deformation_from_map(const FieldSnapshot& chi) {
  const int d = chi.space->dim();
  if (chi.components != d) throw ShapeError("flow map must be vector valued");
  auto G = NodalGradient::of(chi.space);
  DeformationState s;
  s.chi = chi;
  // F = I + grad(chi - X) keeps the identity map exact
  FieldSnapshot disp = chi;
  disp.values -= identity_map(chi.space, chi.time).values;
  s.F = G->vector_gradient(disp);
  for (int i = 0; i < chi.num_dofs(); ++i)
    for (int k = 0; k < d; ++k) s.F.at(i, k * d + k) += 1.0;
  s.J = FieldSnapshot(chi.space, 1, chi.time);
  s.cof = FieldSnapshot(chi.space, d * d, chi.time);
  for (int i = 0; i < chi.num_dofs(); ++i) {
    Tensor2 F = s.F.tensor_at(i);
    double J = F.determinant();
    s.J.values(i) = J;
    if (!(J > 0.0) || !std::isfinite(J))
      throw DegenerateDeformation("flow map lost invertibility", chi.space->node(i), chi.time, J);
    s.cof.set_tensor(i, cofactor(F));
  }
  return s;
}

FieldSnapshot identity_map(const SpacePtr& space, double t) {
  return interpolate_vector(space, [](const SmallVec& x, double) { return x; }, t);
}

FieldSnapshot lagrangian_divergence(const FieldSnapshot& v, const FieldSnapshot& cof) {
  const int d = v.space->dim();
  if (!v.space->same_layout(*cof.space) || cof.components != d * d) throw ShapeError("lagrangian_divergence: mismatch");
  FieldSnapshot gv = NodalGradient::of(v.space)->vector_gradient(v);
  FieldSnapshot out(v.space, 1, v.time);
  for (int i = 0; i < v.num_dofs(); ++i) out.values(i) = ddot(cof.tensor_at(i), gv.tensor_at(i));
  return out;
}

FieldSnapshot piola_divergence(const FieldSnapshot& cof) {
  return NodalGradient::of(cof.space)->tensor_divergence(cof);
}

double piola_condition_residual(const FieldSnapshot& cof) {
  return discrete_norm(piola_divergence(cof), NormKind::L2);
}

std::vector<double> inverse_rate_residual(const Trajectory& F, const Trajectory& v) {
  if (F.num_levels() != v.num_levels() || F.num_levels() < 3) throw ShapeError("inverse_rate_residual needs >= 3 matching levels");
  const int d = F[0].space->dim();
  Trajectory Finv = F;
  for (int n = 0; n < F.num_levels(); ++n)
    for (int i = 0; i < F[n].num_dofs(); ++i) Finv[n].set_tensor(i, Tensor2(F[n].tensor_at(i).inverse()));
  Trajectory dFinv = time_derivative(Finv);
  auto G = NodalGradient::of(v[0].space);
  std::vector<double> out;
  for (int n = 0; n < F.num_levels(); ++n) {
    FieldSnapshot gv = G->vector_gradient(v[n]);
    FieldSnapshot r(F[n].space, d * d, F[n].time);
    for (int i = 0; i < r.num_dofs(); ++i) {
      Tensor2 A = Finv[n].tensor_at(i);
      r.set_tensor(i, Tensor2(dFinv[n].tensor_at(i) + A * gv.tensor_at(i) * A));
    }
    out.push_back(discrete_norm(r, NormKind::L2));
  }
  return out;
}

}  // namespace fsi
