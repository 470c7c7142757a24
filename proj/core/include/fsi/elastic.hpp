#pragma once

#include <memory>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "fsi/assembly.hpp"
#include "fsi/field.hpp"
#include "fsi/mechanics.hpp"

namespace fsi {

/// Linear elastodynamics on the solid region: traction free on GammaB,
/// prescribed velocity w on GammaL, optional body force.
struct ElasticProblem {
  MeshPtr mesh;
  MaterialParams mat;
  FieldSnapshot u0;               // solid P2 vector
  FieldSnapshot u1;               // solid P2 vector
  Trajectory gamma_L_velocity;    // GammaL P2 vector; empty means w = 0
  Trajectory body_force;          // solid P2 vector; empty means none
  TimeWindow window;
  double compat_tol = 1e-8;       // relative tolerance on u1 = w(t0) on GammaL
};

struct SolidTrajectory {
  Trajectory u;
  Trajectory u_t;
  Trajectory u_tt;
  Trajectory traction_gamma_L;               // one-sided P(u) n on GammaL
  std::vector<double> traction_gamma_B_residual;  // weak residual on GammaB dofs
  /// Weak interface reaction M u_tt + K u - F per level on the GammaL P2
  /// boundary space (interleaved). Equals -int_GammaL P(u) n . psi.
  std::vector<Eigen::VectorXd> interface_reaction;
};

/// Newmark (beta = 1/4, gamma = 1/2) solver. Matrices and factorizations are
/// built once per (mesh, material, dt).
class ElasticSolver {
 public:
  ElasticSolver(MeshPtr mesh, const MaterialParams& mat, double dt);

  SolidTrajectory solve(const ElasticProblem& problem) const;

  const SpacePtr& space() const { return space_; }
  /// Stiffness and density-weighted mass on interleaved vector dofs.
  const SpMat& stiffness() const { return K_; }
  const SpMat& mass() const { return M_; }
  /// Unweighted vector mass (used for nodal body-force loads).
  const SpMat& unit_mass() const { return M0_; }
  const std::vector<int>& constrained() const { return cdofs_; }
  double dt() const { return dt_; }

 private:
  MeshPtr mesh_;
  MaterialParams mat_;
  double dt_;
  SpacePtr space_;
  SpMat K_, M_, M0_;
  std::vector<int> cdofs_, fdofs_, gammaB_dofs_;
  SpMat Pf_, Pc_;
  SpMat Keff_fc_, M_fc_;
  SpMat Kff_, Mff_;  // referenced by the iterative solvers
  using CG = Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper>;
  std::unique_ptr<CG> keff_, mff_;
};

/// One-shot convenience wrapper.
SolidTrajectory solve_elastic(const ElasticProblem& problem);

/// One-sided P(u) n on GammaL from the solid side, n pointing out of the
/// fluid; facet values are averaged at shared nodes.
Trajectory interface_traction(const Trajectory& u, const MaterialParams& mat);
FieldSnapshot interface_traction(const FieldSnapshot& u, const MaterialParams& mat);

/// Solid P2 vector space of a mesh (cached per mesh).
SpacePtr solid_space(const MeshPtr& mesh);
/// Fluid P2 velocity and P1 pressure spaces (cached per mesh).
SpacePtr fluid_velocity_space(const MeshPtr& mesh);
SpacePtr fluid_pressure_space(const MeshPtr& mesh);

/// Selection matrix picking `rows` out of `n` entries.
SpMat selection(const std::vector<int>& rows, int n);
/// Vector dof indices (interleaved) of a list of node dofs.
std::vector<int> vector_dofs(const std::vector<int>& dofs, int d);

}  // namespace fsi
