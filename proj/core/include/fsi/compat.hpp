#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fsi/field.hpp"
#include "fsi/mechanics.hpp"

namespace fsi {

struct InitialData {
  FieldSnapshot u0;  // solid P2 vector
  FieldSnapshot u1;  // solid P2 vector
  FieldSnapshot v0;  // fluid P2 vector
};

/// Time derivatives at t0 implied by the equations: u2 = u_tt, v1 = v_t, q0 = p.
struct DerivedData {
  FieldSnapshot u2;  // solid P2 vector
  FieldSnapshot v1;  // fluid P2 vector
  FieldSnapshot q0;  // fluid P1 scalar
};

/// Discrete residuals of the compatibility conditions. Volume residuals are
/// weak (dual) norms sqrt(sum r_i^2 / M_ii); interface residuals are L2(GammaL).
struct CompatReport {
  double residual_i_tractionB = 0.0;  // weak P(u0) n on GammaB
  double residual_i_velmatch = 0.0;   // ||u1 - v0||_{GammaL}
  double residual_ii_div = 0.0;       // weak div v0
  double residual_iii = 0.0;          // weak rho_B u2 - div P(u0) in the solid interior
  std::array<double, 4> residual_iv{};  // div v1 - grad v0 : grad v0^T, fluid momentum, v1 - u2 on GammaL, traction match
  double flux_balance = 0.0;          // int grad v0 : grad v0^T - int_GammaL u2 . n
  double tol = 0.0;
  bool pass_i = true, pass_ii = true, pass_iii = true, pass_iv = true;

  bool all_pass() const { return pass_i && pass_ii && pass_iii && pass_iv; }
  /// Names of failing conditions, e.g. {"(iv)"}.
  std::vector<std::string> failed_conditions() const;
  /// Flat "key = value" dump.
  std::string to_text() const;
};

enum class DataFamily { Zero, SolidDilation, TangentialSwirl };
DataFamily parse_data_family(const std::string& name);

/// Never throws for residual failures; only for fields that do not live on `mesh`.
CompatReport check_compatibility(const InitialData& data, const DerivedData& derived, const MeshPtr& mesh,
                                 const MaterialParams& mat, double tol);

/// Solves the t0 acceleration problem on the whole domain as one saddle-point
/// system: solid and fluid accelerations share GammaL nodes (so u2 = v1 there),
/// the fluid pressure q0 enforces div v1 = grad v0 : grad v0^T, and the summed
/// weak momentum balance enforces the traction match. Throws FluxImbalance
/// when the system is singular or the constraint cannot be met within `tol`.
DerivedData construct_derived(const InitialData& data, const MeshPtr& mesh, const MaterialParams& mat,
                              double tol = 1e-8);

/// Test-data factory:
///  - Zero: all fields zero.
///  - SolidDilation: u0 is the static elastic state under a uniform cavity
///    pressure `amplitude` (rigid modes removed), u1 = v0 = 0.
///  - TangentialSwirl: v0 = amplitude |X|^2 (-X2, X1, 0) projected onto
///    discretely divergence-free fields, u1 the same profile on the solid with
///    the projected values on GammaL, u0 = 0.
/// Derived data come from construct_derived.
std::pair<InitialData, DerivedData> generate_compatible_data(DataFamily family, double amplitude, const MeshPtr& mesh,
                                                            const MaterialParams& mat);

/// Rigid-rotation data paired with zero derived accelerations: violates the flux
/// balance and the divergence condition on v1.
std::pair<InitialData, DerivedData> flux_violating_fixture(double amplitude, const MeshPtr& mesh,
                                                          const MaterialParams& mat);

/// int grad v0 : grad v0^T tested against the fluid P1 pressure basis.
Eigen::VectorXd quadratic_divergence_source(const FieldSnapshot& v0);

}  // namespace fsi
