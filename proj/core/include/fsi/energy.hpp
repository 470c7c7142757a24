#pragma once

#include <string>
#include <vector>

#include "fsi/elastic.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/stokes.hpp"

namespace fsi {

/// Energy budget of a coupled solution on its time grid. Fluid terms are
/// evaluated in reference coordinates.
struct EnergyReport {
  std::vector<double> time;
  std::vector<double> kinetic_fluid;     // rho_L/2 |v|^2
  std::vector<double> kinetic_solid;     // rho_B/2 |u_t|^2
  std::vector<double> elastic_div;       // lambda/2 |div u|^2
  std::vector<double> elastic_strain;    // mu_hat |E(u)|^2
  std::vector<double> dissipation_rate;  // 2 mu |D(v)|^2 at each level
  std::vector<double> dissipation;       // cumulative, midpoint rule per step
  std::vector<double> total;             // sum of the four energies
  std::vector<double> balance_residual;  // d/dt total + dissipation_rate (centered)
  /// total(T) - total(t0) + dissipation(T).
  double integrated_residual = 0.0;

  int num_levels() const { return static_cast<int>(time.size()); }
  /// Largest total energy plus dissipation over the window; the scale of the residuals.
  double scale() const;
  /// CSV with header "t,kinetic_fluid,kinetic_solid,elastic_div,elastic_strain,dissipation,residual".
  std::string to_csv() const;
};

/// Either trajectory may be empty (no fluid or no solid). With `def` the
/// dissipation uses D(v) = sym(grad v cof^T), otherwise the plain sym(grad v).
EnergyReport energy_report(const SolidTrajectory& solid, const FluidTrajectory& fluid, const MaterialParams& mat,
                           const DeformationTrajectory* def = nullptr);

}  // namespace fsi
