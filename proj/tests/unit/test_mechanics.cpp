#include <gtest/gtest.h>

#include <cmath>

#include "fsi/errors.hpp"
#include "fsi/mechanics.hpp"
#include "generators.hpp"

using namespace fsi;
using fsi::testing::random_deformation;
using fsi::testing::random_tensor;

TEST(Cofactor, HandComputed2x2) {
  Tensor2 F(2, 2);
  F << 2, 1, 3, 4;
  Tensor2 expect(2, 2);
  expect << 4, -3, -1, 2;
  EXPECT_LT((cofactor(F) - expect).norm(), 1e-15);
}

TEST(Cofactor, HandComputed3x3Diagonal) {
  Tensor2 F = Tensor2::Zero(3, 3);
  F.diagonal() << 2, 3, 5;
  Tensor2 expect = Tensor2::Zero(3, 3);
  expect.diagonal() << 15, 10, 6;
  EXPECT_LT((cofactor(F) - expect).norm(), 1e-14);
}

TEST(Cofactor, IdentitiesOnRandomMatrices) {
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 2;
    const Tensor2 F = random_deformation(d);
    const Tensor2 C = cofactor(F);
    const double J = F.determinant();
    EXPECT_LT((C * F.transpose() - J * identity(d)).norm(), 1e-13 * C.norm() * F.norm());
    EXPECT_LT((C - J * F.inverse().transpose()).norm(), 1e-13 * C.norm());
    // cof(AB) = cof(A) cof(B)
    const Tensor2 G = random_deformation(d);
    EXPECT_LT((cofactor(F * G) - C * cofactor(G)).norm(), 1e-12 * C.norm() * cofactor(G).norm());
  }
}

TEST(Cofactor, RejectsSingularAndBadShapes) {
  Tensor2 F(2, 2);
  F << 1, 2, 2, 4;
  EXPECT_THROW(cofactor(F), SingularMatrixError);
  EXPECT_THROW(cofactor(Tensor2::Identity(1, 1)), ShapeError);
}

TEST(Stress, PiolaIsLinearIsotropic) {
  MaterialParams m{1, 1, 2.0, 3.0, 1};
  Tensor2 G(2, 2);
  G << 1, 2, 0, -1;
  Tensor2 expect(2, 2);
  // E = [[1, 1], [1, -1]], tr E = 0
  expect << 6, 6, 6, -6;
  EXPECT_LT((piola_stress(G, m) - expect).norm(), 1e-14);
}

TEST(Stress, CauchyIsSymmetricAndTraceMatchesPressure) {
  MaterialParams m;
  m.mu = 0.7;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 2;
    const Tensor2 G = random_tensor(d);
    const double p = fsi::testing::uniform();
    const Tensor2 T = cauchy_stress(G, p, m);
    EXPECT_LT((T - T.transpose()).norm(), 1e-15);
    EXPECT_NEAR(T.trace(), -d * p + 2 * m.mu * G.trace(), 1e-13);
  }
}

TEST(Stress, PiolaTransformReducesToCauchyAtIdentity) {
  MaterialParams m;
  m.mu = 0.3;
  const Tensor2 G = random_tensor(3);
  EXPECT_LT((piola_transform_stress(G, 1.5, identity(3), m) - cauchy_stress(G, 1.5, m)).norm(), 1e-14);
}

TEST(Stress, MismatchFactoredMatchesDirectAndVanishesAtIdentity) {
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 2;
    const Tensor2 G = random_tensor(d);
    const Tensor2 C = cofactor(random_deformation(d));
    EXPECT_LT((stress_mismatch(G, C) - stress_mismatch_unfactored(G, C)).norm(), 1e-13 * (1 + C.squaredNorm()));
    EXPECT_LT(stress_mismatch(G, identity(d)).norm(), 1e-15);
  }
}

TEST(Material, ValidateRejectsNonPositive) {
  MaterialParams m;
  EXPECT_NO_THROW(m.validate());
  m.mu = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
  m.mu = NAN;
  EXPECT_THROW(m.validate(), ConfigError);
  MaterialParams w{2.0, 1, 2.0, 3.0, 1};
  EXPECT_DOUBLE_EQ(w.pressure_wave_speed(), 2.0);
}

TEST(IdentitySuite, DeterministicAndPassing) {
  const auto a = tensor_identity_suite(200, 9), b = tensor_identity_suite(200, 9);
  EXPECT_EQ(a.samples, 200);
  EXPECT_EQ(a.max_cof_inverse_error, b.max_cof_inverse_error);
  EXPECT_TRUE(a.passed(1e-10));
  EXPECT_THROW(tensor_identity_suite(0, 1), ConfigError);
}
