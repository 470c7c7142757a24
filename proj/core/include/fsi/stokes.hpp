#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/SparseLU>

#include "fsi/assembly.hpp"
#include "fsi/field.hpp"
#include "fsi/mechanics.hpp"

namespace fsi {

/// Discrete right-hand sides per time level: momentum loads on interleaved
/// fluid velocity dofs and constraint loads int q g on pressure dofs.
struct WeakLoads {
  std::vector<Eigen::VectorXd> momentum;
  std::vector<Eigen::VectorXd> constraint;
  bool empty() const { return momentum.empty() && constraint.empty(); }
};

/// Non-homogeneous Stokes problem on the fluid region with prescribed
/// divergence g, body force f and boundary stress d on GammaL. Empty
/// trajectories mean zero data. When `loads` is set it replaces g, f, d.
struct StokesProblem {
  MeshPtr mesh;
  MaterialParams mat;
  Trajectory g;    // fluid scalar (P1 or P2)
  Trajectory f;    // fluid P2 vector
  Trajectory d;    // GammaL P2 vector
  FieldSnapshot v0;
  TimeWindow window;
  std::optional<WeakLoads> loads;
  std::optional<FieldSnapshot> p0;  // pressure reported at t0; extrapolated when absent
  double compat_tol = 1e-8;
  bool backward_euler_first_step = false;
};

struct FluidTrajectory {
  Trajectory v;
  Trajectory p;
  Trajectory v_t;
  Trajectory stress_gamma_L;              // one-sided (-p I + 2 mu D(v)) n
  std::vector<double> divergence_residual;  // |B v - G| per level
};

/// Taylor-Hood P2/P1 Crank-Nicolson solver with a cached saddle-point factorization.
class StokesSolver {
 public:
  StokesSolver(MeshPtr mesh, const MaterialParams& mat, double dt);

  FluidTrajectory solve(const StokesProblem& problem) const;
  /// Weak loads assembled from nodal g, f, d trajectories.
  WeakLoads loads_from_fields(const StokesProblem& problem) const;

  const SpacePtr& velocity_space() const { return vspace_; }
  const SpacePtr& pressure_space() const { return pspace_; }
  const SpMat& mass() const { return M0_; }       // unweighted vector mass
  const SpMat& viscous() const { return A_; }
  const SpMat& divergence() const { return B_; }
  /// Maps boundary P2 vector values on GammaL to fluid momentum loads.
  const SpMat& boundary_load() const { return L_; }
  /// int q g for g on the P2 (degree 2) or P1 (degree 1) fluid space.
  const SpMat& constraint_load(int degree) const { return degree == 2 ? Q2_ : Q1_; }

 private:
  MeshPtr mesh_;
  MaterialParams mat_;
  double dt_;
  SpacePtr vspace_, pspace_, bspace_;
  SpMat M0_, A_, B_, L_, Q1_, Q2_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> cn_, be_;
  SpMat cn_rhs_;  // rho/dt M - A/2
};

FluidTrajectory solve_stokes(const StokesProblem& problem);

/// One-sided fluid stress on GammaL with n pointing out of the fluid.
FieldSnapshot fluid_boundary_stress(const FieldSnapshot& v, const FieldSnapshot& p, const MaterialParams& mat);
Trajectory fluid_boundary_stress(const Trajectory& v, const Trajectory& p, const MaterialParams& mat);

}  // namespace fsi
