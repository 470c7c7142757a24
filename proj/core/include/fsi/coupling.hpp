#pragma once

#include "fsi/elastic.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/stokes.hpp"

namespace fsi {

/// Frozen-deformation coupling data. g, f, d are nodal (strong) diagnostics;
/// `loads` is the weak form actually handed to the Stokes solver.
struct ForcingBundle {
  Trajectory g;  // fluid P2 scalar
  Trajectory f;  // fluid P2 vector
  Trajectory d;  // GammaL P2 vector
  WeakLoads loads;
  int source_iteration = 0;
};

/// Nodal (I - cof F) : grad v.
Trajectory forcing_g(const Trajectory& v, const DeformationTrajectory& def);
/// Nodal Div(T_chi(v, p) - T(v, p)); p is P1 and is interpolated to P2 nodes.
Trajectory forcing_f(const Trajectory& v, const Trajectory& p, const DeformationTrajectory& def,
                     const MaterialParams& mat);
/// Nodal [T(v, p) - T_chi(v, p) + P(u)] n on GammaL with the fluid-outward normal.
Trajectory forcing_d(const SolidTrajectory& u, const Trajectory& v, const Trajectory& p,
                     const DeformationTrajectory& def, const MaterialParams& mat);
/// Nodal stress mismatch tensor S.
Trajectory stress_mismatch_S(const Trajectory& v, const DeformationTrajectory& def);

/// How int_GammaL P(u) n . phi enters the fluid momentum load.
///  - Reaction: the solid's weak interface reaction (variationally consistent,
///    conserves the interface power exchange exactly).
///  - Traction: quadrature of the one-sided traction P(grad u) n.
enum class InterfaceLoad { Reaction, Traction };

/// Weak loads: momentum  int (-p (I - C) + mu S) : grad phi + int_GammaL P(u) n . phi,
/// constraint int q (I - C) : grad v, with C = cof F at quadrature points.
WeakLoads coupling_loads(const SolidTrajectory& u, const Trajectory& v, const Trajectory& p,
                         const DeformationTrajectory& def, const MaterialParams& mat,
                         InterfaceLoad mode = InterfaceLoad::Reaction);

ForcingBundle assemble_forcing(const SolidTrajectory& u, const Trajectory& v, const Trajectory& p,
                               const DeformationTrajectory& def, const MaterialParams& mat, int iteration,
                               bool with_diagnostics = true, InterfaceLoad mode = InterfaceLoad::Reaction);

}  // namespace fsi
