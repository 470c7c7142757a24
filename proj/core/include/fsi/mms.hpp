#pragma once

#include <string>
#include <vector>

#include "fsi/mechanics.hpp"

namespace fsi {

/// One refinement level of a manufactured-solution study.
struct MmsRow {
  double h = 0.0;
  double dt = 0.0;
  double error = 0.0;            // L2 displacement (elastic) or velocity (Stokes) at T
  double secondary_error = 0.0;  // L2 pressure at T (Stokes only)
};

struct MmsStudy {
  std::string solver;  // "elastic" or "stokes"
  std::vector<MmsRow> rows;
  double order = 0.0;
  double secondary_order = 0.0;
};

/// Elastic solver on the d = 2 annulus solid against a closed-form solution
/// that is traction free on the outer circle. dt = dt_over_h * h.
MmsStudy mms_elastic(const std::vector<double>& hs, const MaterialParams& mat, double T = 0.5, double dt_over_h = 0.5);

/// Stokes solver on the d = 2 disk with prescribed divergence, body force and
/// boundary stress from a closed-form (v, p).
MmsStudy mms_stokes(const std::vector<double>& hs, const MaterialParams& mat, double T = 0.5, double dt_over_h = 0.5);

/// Columns "solver,h,dt,error,secondary_error,order,secondary_order".
std::string convergence_csv(const std::vector<MmsStudy>& studies);

}  // namespace fsi
