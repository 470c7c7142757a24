#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "fsi/fe_space.hpp"

namespace fsi {

/// Nodal field at one time level. Values are dof-major:
/// values[dof * components + c]; tensors are stored row-major (c = i*d + j).
struct FieldSnapshot {
  SpacePtr space;
  int components = 1;
  Eigen::VectorXd values;
  double time = 0.0;

  FieldSnapshot() = default;
  FieldSnapshot(SpacePtr s, int ncomp, double t = 0.0);
  FieldSnapshot(SpacePtr s, int ncomp, Eigen::VectorXd v, double t);

  int num_dofs() const { return space ? space->num_dofs() : 0; }
  double& at(int dof, int c) { return values(dof * components + c); }
  double at(int dof, int c) const { return values(dof * components + c); }
  SmallVec vector_at(int dof) const;
  Tensor2 tensor_at(int dof) const;
  void set_vector(int dof, const SmallVec& v);
  void set_tensor(int dof, const Tensor2& t);
  /// Component c as a scalar nodal vector.
  Eigen::VectorXd component(int c) const;
  bool compatible(const FieldSnapshot& o) const;
  /// Throws ShapeError on mismatch.
  void check_compatible(const FieldSnapshot& o, const char* what) const;
};

using ScalarFn = std::function<double(const SmallVec&, double)>;
using VectorFn = std::function<SmallVec(const SmallVec&, double)>;

FieldSnapshot interpolate_scalar(const SpacePtr& s, const ScalarFn& f, double t);
FieldSnapshot interpolate_vector(const SpacePtr& s, const VectorFn& f, double t);
/// Copies nodal values of `src` onto `dst_space` at shared nodes. Every dst
/// node must exist in the source space unless `allow_missing`.
FieldSnapshot restrict_to(const FieldSnapshot& src, const SpacePtr& dst_space, bool allow_missing = false);
/// Evaluates a P1 field at the P2 nodes of the same region.
FieldSnapshot p1_to_p2(const FieldSnapshot& p1, const SpacePtr& p2_space);

/// Uniformly sampled time series of snapshots on one space.
struct Trajectory {
  std::vector<FieldSnapshot> levels;
  double t0 = 0.0;
  double dt = 0.0;

  bool empty() const { return levels.empty(); }
  int num_levels() const { return static_cast<int>(levels.size()); }
  double t_end() const { return t0 + dt * (num_levels() - 1); }
  const FieldSnapshot& operator[](int n) const { return levels[n]; }
  FieldSnapshot& operator[](int n) { return levels[n]; }
  /// Checks uniform spacing, shared space and component count.
  void validate() const;
  static Trajectory constant(const FieldSnapshot& f, double t0, double dt, int nlevels);
  static Trajectory zeros(const SpacePtr& s, int ncomp, double t0, double dt, int nlevels);
};

/// Level-wise finite-difference time derivative (second order, one-sided at the ends).
Trajectory time_derivative(const Trajectory& tr);
/// Difference of two trajectories on the same space and times.
Trajectory difference(const Trajectory& a, const Trajectory& b);

/// Time window (t0, t0 + T] sampled with step dt.
struct TimeWindow {
  double t0 = 0.0;
  double T = 0.1;
  double dt = 0.01;
  int steps() const;
  double time(int n) const { return t0 + n * dt; }
};

}  // namespace fsi
