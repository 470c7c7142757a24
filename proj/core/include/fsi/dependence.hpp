#pragma once

#include <vector>

#include "fsi/fixed_point.hpp"

namespace fsi {

/// a + s b component-wise (fields must share spaces).
InitialData combine(const InitialData& a, const InitialData& b, double s);

/// Right side of the continuous-dependence estimate without its constant:
/// (1 + |dv0|) |dv0| + |du0| + |du1|, with the H^{5/2}, H^3, H^{3/2} norms
/// replaced by their discrete H^2, H^2 and H^{3/2} estimates.
double data_difference_norm(const InitialData& a, const InitialData& b);

/// Solid (max-in-time H2 of u, H1 of u_t, L2 of u_tt) plus the velocity-pressure
/// surrogate of the fluid difference.
double solution_difference_norm(const Solution& a, const Solution& b);

struct DependenceResult {
  double solution_difference = 0.0;
  double data_difference = 0.0;
  double ratio = 0.0;
  /// Both differences sat below the solver tolerance and the ratio was set to 0.
  bool guarded = false;
};

/// Runs the coupled solver on both data sets (same mesh and window) and
/// compares. A shrunk window in either run is reported as ConfigError since the
/// solutions would live on different intervals.
DependenceResult dependence_experiment(const InitialData& a, const InitialData& b, const MeshPtr& mesh,
                                       const MaterialParams& mat, const FixedPointConfig& cfg);
DependenceResult compare_solutions(const Solution& sa, const Solution& sb, const InitialData& a, const InitialData& b,
                                   double tol);

struct DependenceSweep {
  std::vector<double> eps;
  std::vector<DependenceResult> results;
  double slope = 0.0;           // log-log slope of solution_difference in eps
  double ratio_variation = 0.0; // max ratio / min ratio - 1
};

/// Compares base against base + eps * perturbation for each eps; the base run
/// is solved once.
DependenceSweep dependence_sweep(const InitialData& base, const InitialData& perturbation, const std::vector<double>& eps,
                                 const MeshPtr& mesh, const MaterialParams& mat, const FixedPointConfig& cfg);

}  // namespace fsi
