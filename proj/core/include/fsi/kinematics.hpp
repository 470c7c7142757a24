#pragma once

#include <vector>

#include "fsi/field.hpp"
#include "fsi/operators.hpp"

namespace fsi {

/// Flow map chi and derived nodal kinematics at one time level.
struct DeformationState {
  FieldSnapshot chi;  // vector
  FieldSnapshot F;    // tensor, grad chi
  FieldSnapshot J;    // scalar, det F
  FieldSnapshot cof;  // tensor, cof F
  double time() const { return chi.time; }
};

/// Flow map sampled on a time grid together with the velocity that generated it.
struct DeformationTrajectory {
  std::vector<DeformationState> levels;
  Trajectory velocity;
  double t0 = 0.0;
  double dt = 0.0;
  int num_levels() const { return static_cast<int>(levels.size()); }
  const DeformationState& operator[](int n) const { return levels[n]; }
  std::pair<double, double> jacobian_range() const;
  Trajectory chi_trajectory() const;
};

/// F = grad chi, J, cof F from nodal chi. Throws DegenerateDeformation when
/// J <= 0 at a node.
DeformationState deformation_from_map(const FieldSnapshot& chi);

/// The reference map chi = X on a space.
FieldSnapshot identity_map(const SpacePtr& space, double t);

/// Nodal cof F : grad v.
FieldSnapshot lagrangian_divergence(const FieldSnapshot& v, const FieldSnapshot& cof);

/// Nodal Div(cof F) (row-wise).
FieldSnapshot piola_divergence(const FieldSnapshot& cof);
/// L2 norm of the nodal Div(cof F).
double piola_condition_residual(const FieldSnapshot& cof);

/// Level-wise L2 norm of d/dt(F^-1) + F^-1 (grad v) F^-1 with a second-order
/// time difference; grad v is the nodal gradient of the velocity.
std::vector<double> inverse_rate_residual(const Trajectory& F, const Trajectory& v);

}  // namespace fsi
