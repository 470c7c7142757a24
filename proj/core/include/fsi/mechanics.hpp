#pragma once

#include <cstdint>

#include <span>
#include <vector>

#include "fsi/tensor.hpp"

namespace fsi {

/// Densities, Lame constants and viscosity. All strictly positive.
struct MaterialParams {
  double rho_B = 1.0;   ///< solid mass density
  double rho_L = 1.0;   ///< fluid mass density
  double lambda = 1.0;  ///< first Lame constant
  double mu_hat = 1.0;  ///< second Lame constant (shear modulus)
  double mu = 1.0;      ///< dynamic viscosity

  /// Throws ConfigError if any parameter is not strictly positive and finite.
  void validate() const;
  /// Pressure-wave speed sqrt((lambda + 2 mu_hat) / rho_B).
  double pressure_wave_speed() const;
};

/// det(F) F^{-T}, computed from signed minors. Throws SingularMatrixError when
/// det(F) vanishes relative to the scale of F.
Tensor2 cofactor(const Tensor2& F);

/// Symmetric part of a gradient. The same operator yields the infinitesimal
/// strain E(u) from a displacement gradient and the rate of deformation D(v)
/// from a velocity gradient; only the units differ.
inline Tensor2 symmetric_gradient(const Tensor2& grad) { return sym(grad); }

/// Linear isotropic solid: lambda tr(E) I + 2 mu_hat E.
Tensor2 piola_stress(const Tensor2& grad_u, const MaterialParams& mat);

/// Newtonian fluid: -p I + 2 mu D(v).
Tensor2 cauchy_stress(const Tensor2& grad_v, double p, const MaterialParams& mat);

/// Reference-configuration fluid stress for a deformation with cofactor C:
/// -p C + mu grad_v C^T C + mu C grad_v^T C.
Tensor2 piola_transform_stress(const Tensor2& grad_v, double p, const Tensor2& cof,
                               const MaterialParams& mat);

/// Stress mismatch S = 2 D(v) - grad_v C^T C - C grad_v^T C written through
/// products against (I - C), so that it vanishes identically at C = I.
Tensor2 stress_mismatch(const Tensor2& grad_v, const Tensor2& cof);

/// Same quantity evaluated directly from its definition (used as an oracle).
Tensor2 stress_mismatch_unfactored(const Tensor2& grad_v, const Tensor2& cof);

struct IdentitySuiteReport {
  int samples = 0;
  double max_cof_transpose_error = 0.0;  // |cof(F) F^T - det(F) I| / (|cof F| |F|)
  double max_cof_inverse_error = 0.0;    // |cof F - det(F) F^-T| / |cof F|
  double max_mismatch_error = 0.0;       // factored vs direct stress mismatch
  bool passed(double tol) const {
    return max_cof_transpose_error <= tol && max_cof_inverse_error <= tol && max_mismatch_error <= tol;
  }
};

/// Random invertible 2x2 and 3x3 matrices (alternating, condition number
/// below 1e4), deterministic in `seed`.
IdentitySuiteReport tensor_identity_suite(int samples, std::uint64_t seed);

}  // namespace fsi
