#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fsi/compat.hpp"
#include "fsi/coupling.hpp"
#include "fsi/energy.hpp"

namespace fsi {

struct FixedPointConfig {
  double T = 0.1;
  double dt = 0.01;
  double tol_inner = 1e-8;
  double tol_outer = 1e-8;
  int max_inner = 30;
  int max_outer = 20;
  double shrink_factor = 0.5;
  int strikes = 3;  // consecutive ratios >= 1 tolerated before giving up
  bool backward_euler_first_step = false;
  InterfaceLoad interface_load = InterfaceLoad::Reaction;
  double compat_tol = 1e-6;
  /// Record the energy residual of every inner iterate (costs one energy report each).
  bool track_energy = true;

  void validate() const;
};

/// One row of iterations.csv.
struct IterationRecord {
  int outer_k = 0;
  int inner_k = 0;
  double inner_increment = 0.0;
  double ratio = 0.0;
  bool has_ratio = false;
  double Jmin = 1.0;
  double Jmax = 1.0;
  double energy_residual = 0.0;
};

struct IterationReport {
  /// Relative increments of the last inner loop and their successive quotients.
  std::vector<double> inner_increments;
  std::vector<double> contraction_ratios;
  /// Relative increments of the flow map across outer iterations.
  std::vector<double> outer_increments;
  std::vector<double> outer_ratios;
  std::pair<double, double> J_range{1.0, 1.0};
  double accepted_T = 0.0;
  int window_shrinks = 0;
  std::vector<IterationRecord> records;

  int inner_iterations() const { return static_cast<int>(inner_increments.size()); }
  int outer_iterations() const { return static_cast<int>(outer_increments.size()); }
  /// Header "outer_k,inner_k,inner_increment,ratio,Jmin,Jmax,energy_residual".
  std::string iterations_csv() const;
};

/// Sub-solvers shared by every iteration on one (mesh, material, dt).
class CoupledSolvers {
 public:
  CoupledSolvers(MeshPtr mesh, const MaterialParams& mat, double dt);
  const MeshPtr& mesh() const { return mesh_; }
  const MaterialParams& material() const { return mat_; }
  double dt() const { return elastic_.dt(); }
  const ElasticSolver& elastic() const { return elastic_; }
  const StokesSolver& stokes() const { return stokes_; }

 private:
  MeshPtr mesh_;
  MaterialParams mat_;
  ElasticSolver elastic_;
  StokesSolver stokes_;
};

struct InnerResult {
  SolidTrajectory solid;
  FluidTrajectory fluid;
  IterationReport report;
};

/// Surrogate of the velocity-pressure space norm: L2-in-time of H2(v), v_tt,
/// H1(p) and p_t, combined in the l2 sense.
double velocity_pressure_norm(const Trajectory& v, const Trajectory& p);
/// Surrogate of the flow-map space norm: L2-in-time of H2(chi_t) and chi_ttt.
double flow_map_norm(const Trajectory& chi);

/// Frozen-deformation iteration (v, p) -> solid -> loads -> Stokes. Starts from
/// the time-constant extension of (v0, q0) and finishes with an elastic solve
/// driven by the converged velocity. Throws NonContraction after `strikes`
/// consecutive non-decreasing increments or when max_inner is exhausted.
InnerResult inner_fixed_point(const CoupledSolvers& solvers, const DeformationTrajectory& chi_hat,
                              const InitialData& data, const DerivedData* derived, const FixedPointConfig& cfg,
                              int outer_k = 1);

/// chi = X + int v dt by the trapezoid rule, with F, J and cof F per level.
DeformationTrajectory flow_map_update(const Trajectory& v);

/// chi = X + (t - t0) v0 on the window, with velocity v0 at every level.
DeformationTrajectory seed_deformation(const FieldSnapshot& v0, const TimeWindow& window);

struct Solution {
  SolidTrajectory solid;
  FluidTrajectory fluid;
  DeformationTrajectory chi;
  IterationReport report;
  EnergyReport energy;
  /// max over levels of ||v - u_t||_{L2(GammaL)}.
  double interface_mismatch = 0.0;
  /// max over levels of ||Div cof F||_{L2}.
  double piola_residual = 0.0;
  double max_J_deviation() const { return std::max(1.0 - report.J_range.first, report.J_range.second - 1.0); }
};

/// Full iteration chi -> inner solve -> flow map. Checks compatibility first
/// (CompatibilityError), shrinks T on NonContraction and raises WindowCollapse
/// when no whole step remains.
Solution outer_fixed_point(const InitialData& data, const MeshPtr& mesh, const MaterialParams& mat,
                           const FixedPointConfig& cfg);

/// Geometric mean of successive ratios. Throws ConfigError with fewer than 2 increments.
double contraction_estimate(const std::vector<double>& increments);

}  // namespace fsi
