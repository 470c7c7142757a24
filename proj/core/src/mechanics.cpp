#include "fsi/mechanics.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <random>
#include <string>

#include "fsi/errors.hpp"

namespace fsi {

void MaterialParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("material parameter '") + name + "' must be positive, got " +
                        std::to_string(v));
    }
  };
  check(rho_B, "rho_B");
  check(rho_L, "rho_L");
  check(lambda, "lambda");
  check(mu_hat, "mu_hat");
  check(mu, "mu");
}

double MaterialParams::pressure_wave_speed() const { return std::sqrt((lambda + 2.0 * mu_hat) / rho_B); }

Tensor2 cofactor(const Tensor2& F) {
  const auto d = F.rows();
  if (F.cols() != d || (d != 2 && d != 3)) {
    throw ShapeError("cofactor: expected a 2x2 or 3x3 matrix");
  }
  Tensor2 C(d, d);
  double det = 0.0;
  if (d == 2) {
    C(0, 0) = F(1, 1);
    C(0, 1) = -F(1, 0);
    C(1, 0) = -F(0, 1);
    C(1, 1) = F(0, 0);
    det = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
  } else {
    for (int i = 0; i < 3; ++i) {
      const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
      for (int j = 0; j < 3; ++j) {
        const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        // cyclic index choice absorbs the (-1)^{i+j} sign
        C(i, j) = F(i1, j1) * F(i2, j2) - F(i1, j2) * F(i2, j1);
      }
    }
    det = F.row(0).dot(C.row(0));
  }
  const double scale = F.cwiseAbs().maxCoeff();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * std::pow(scale, static_cast<double>(d))) {
    throw SingularMatrixError("cofactor: singular deformation gradient (det = " + std::to_string(det) + ")");
  }
  return C;
}

Tensor2 piola_stress(const Tensor2& grad_u, const MaterialParams& mat) {
  const Tensor2 E = symmetric_gradient(grad_u);
  return mat.lambda * E.trace() * identity(static_cast<int>(grad_u.rows())) + 2.0 * mat.mu_hat * E;
}

Tensor2 cauchy_stress(const Tensor2& grad_v, double p, const MaterialParams& mat) {
  return -p * identity(static_cast<int>(grad_v.rows())) + 2.0 * mat.mu * symmetric_gradient(grad_v);
}

Tensor2 piola_transform_stress(const Tensor2& grad_v, double p, const Tensor2& cof,
                               const MaterialParams& mat) {
  return -p * cof + mat.mu * (grad_v * cof.transpose() * cof) + mat.mu * (cof * grad_v.transpose() * cof);
}

Tensor2 stress_mismatch(const Tensor2& grad_v, const Tensor2& cof) {
  const Tensor2 I = identity(static_cast<int>(cof.rows()));
  const Tensor2 K = I - cof;
  const Tensor2 a = grad_v * K.transpose();
  const Tensor2 b = grad_v * cof.transpose();
  return a + a.transpose() + b * K + b.transpose() * K;
}

Tensor2 stress_mismatch_unfactored(const Tensor2& grad_v, const Tensor2& cof) {
  return 2.0 * symmetric_gradient(grad_v) - grad_v * cof.transpose() * cof - cof * grad_v.transpose() * cof;
}

IdentitySuiteReport tensor_identity_suite(int samples, std::uint64_t seed) {
  if (samples < 1) throw ConfigError("identity suite needs at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  IdentitySuiteReport r;
  while (r.samples < samples) {
    const int d = 2 + r.samples % 2;
    Tensor2 F(d, d), G(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        F(i, j) = n01(rng);
        G(i, j) = n01(rng);
      }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(F);
    const auto& sv = svd.singularValues();
    if (sv(d - 1) <= 1e-4 * sv(0)) continue;
    const double J = F.determinant();
    const Tensor2 C = cofactor(F);
    const Tensor2 FinvT = F.inverse().transpose();
    r.max_cof_transpose_error = std::max(
        r.max_cof_transpose_error, (C * F.transpose() - J * identity(d)).norm() / (C.norm() * F.norm()));
    r.max_cof_inverse_error = std::max(r.max_cof_inverse_error, (C - J * FinvT).norm() / C.norm());
    const Tensor2 a = stress_mismatch(G, C), b = stress_mismatch_unfactored(G, C);
    r.max_mismatch_error = std::max(r.max_mismatch_error, (a - b).norm() / std::max(b.norm(), G.norm() * C.squaredNorm()));
    ++r.samples;
  }
  return r;
}

}  // namespace fsi
