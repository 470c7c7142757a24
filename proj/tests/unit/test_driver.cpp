#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "fsi/compat.hpp"
#include "fsi/dependence.hpp"
#include "fsi/elastic.hpp"
#include "fsi/errors.hpp"
#include "fsi/fixed_point.hpp"
#include "fsi/operators.hpp"
#include "generators.hpp"

using namespace fsi;

namespace {

const MaterialParams kMat{0.1, 1.0, 2.0, 1.0, 0.5};

FixedPointConfig quick_config() {
  FixedPointConfig c;
  c.T = 0.05;
  c.dt = 0.0125;
  return c;
}

// one mesh for all cached runs so their fields share spaces
const MeshPtr& shared_mesh() {
  static const MeshPtr m = fsi::testing::small_annulus();
  return m;
}

const Solution& swirl_run(double amplitude) {
  static std::map<double, Solution> cache;
  auto it = cache.find(amplitude);
  if (it != cache.end()) return it->second;
  const MeshPtr& m = shared_mesh();
  auto data = generate_compatible_data(DataFamily::TangentialSwirl, amplitude, m, kMat).first;
  return cache.emplace(amplitude, outer_fixed_point(data, m, kMat, quick_config())).first->second;
}

}  // namespace

TEST(FixedPointConfig, ValidateRanges) {
  FixedPointConfig c = quick_config();
  EXPECT_NO_THROW(c.validate());
  c.dt = c.T;
  EXPECT_THROW(c.validate(), ConfigError);
  c = quick_config();
  c.shrink_factor = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = quick_config();
  c.max_inner = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(FixedPoint, ContractionEstimateOfGeometricSequence) {
  EXPECT_NEAR(contraction_estimate({1.0, 0.5, 0.25, 0.125}), 0.5, 1e-14);
  EXPECT_NEAR(contraction_estimate({1.0, 0.1}), 0.1, 1e-14);
  EXPECT_THROW(contraction_estimate({1.0}), ConfigError);
}

TEST(FixedPoint, FlowMapOfConstantVelocityIsTranslation) {
  auto m = fsi::testing::small_annulus();
  const SpacePtr V = fluid_velocity_space(m);
  const FieldSnapshot v0 = fsi::testing::random_field(V, 2, 0.0, 0.01);
  const TimeWindow win{0.0, 0.04, 0.01};
  const DeformationTrajectory chi = flow_map_update(Trajectory::constant(v0, 0.0, 0.01, 5));
  const DeformationTrajectory seed = seed_deformation(v0, win);
  ASSERT_EQ(chi.num_levels(), 5);
  for (int n = 0; n < 5; ++n) EXPECT_LT((chi[n].chi.values - seed[n].chi.values).norm(), 1e-14);
}

TEST(FixedPoint, ZeroDataConvergesImmediately) {
  auto m = fsi::testing::small_annulus();
  auto data = generate_compatible_data(DataFamily::Zero, 0.0, m, kMat).first;
  const Solution s = outer_fixed_point(data, m, kMat, quick_config());
  EXPECT_EQ(s.report.outer_iterations(), 1);
  EXPECT_EQ(s.report.inner_iterations(), 1);
  for (const auto& l : s.fluid.v.levels) EXPECT_EQ(l.values.norm(), 0.0);
  for (const auto& l : s.solid.u.levels) EXPECT_EQ(l.values.norm(), 0.0);
  EXPECT_EQ(s.max_J_deviation(), 0.0);
}

TEST(FixedPoint, SmallSwirlConvergesWithContraction) {
  const Solution& s = swirl_run(0.01);
  EXPECT_DOUBLE_EQ(s.report.accepted_T, 0.05);
  EXPECT_GE(s.report.outer_iterations(), 2);
  for (double r : s.report.contraction_ratios) EXPECT_LT(r, 1.0);
  EXPECT_LT(s.max_J_deviation(), 1e-3);
  EXPECT_LT(s.interface_mismatch, 1e-7);
  const std::string csv = s.report.iterations_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "outer_k,inner_k,inner_increment,ratio,Jmin,Jmax,energy_residual");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(s.report.records.size()) + 1);
}

TEST(FixedPoint, StarvedInnerLoopCollapsesTheWindow) {
  auto m = fsi::testing::small_annulus();
  auto data = generate_compatible_data(DataFamily::TangentialSwirl, 0.01, m, kMat).first;
  FixedPointConfig c = quick_config();
  c.max_inner = 1;
  EXPECT_THROW(outer_fixed_point(data, m, kMat, c), WindowCollapse);
}

TEST(FixedPoint, IncompatibleDataIsRejectedBeforeIterating) {
  auto m = fsi::testing::small_annulus();
  // the solid velocity no longer matches the fluid on GammaL
  auto data = generate_compatible_data(DataFamily::TangentialSwirl, 0.01, m, kMat).first;
  data.u1.values *= 2.0;
  EXPECT_THROW(outer_fixed_point(data, m, kMat, quick_config()), CompatibilityError);
}

TEST(Compat, GeneratedFamiliesPassAllConditions) {
  auto m = fsi::testing::small_annulus();
  for (auto fam : {DataFamily::Zero, DataFamily::SolidDilation, DataFamily::TangentialSwirl}) {
    const auto [data, der] = generate_compatible_data(fam, 0.05, m, kMat);
    const CompatReport r = check_compatibility(data, der, m, kMat, 1e-6);
    EXPECT_TRUE(r.all_pass()) << r.to_text();
    EXPECT_TRUE(r.failed_conditions().empty());
  }
}

TEST(Compat, SwirlVelocityIsDiscretelyDivergenceFreeAndMatchesSolid) {
  auto m = fsi::testing::small_annulus();
  const auto data = generate_compatible_data(DataFamily::TangentialSwirl, 0.02, m, kMat).first;
  const FieldSnapshot a = trace_extract(data.u1, BoundaryTag::GammaL), b = trace_extract(data.v0, BoundaryTag::GammaL);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT(data.v0.values.norm(), 0.0);
}

TEST(Compat, FluxFixtureNamesConditionFour) {
  auto m = fsi::testing::small_annulus();
  const auto [data, der] = flux_violating_fixture(0.1, m, kMat);
  const auto failed = check_compatibility(data, der, m, kMat, 1e-6).failed_conditions();
  EXPECT_NE(std::find(failed.begin(), failed.end(), "(iv)"), failed.end());
}

TEST(Compat, FieldsOnAnotherMeshAreShapeErrors) {
  auto m = fsi::testing::small_annulus(), other = fsi::testing::small_annulus(0.25);
  const auto [data, der] = generate_compatible_data(DataFamily::Zero, 0.0, m, kMat);
  EXPECT_THROW(check_compatibility(data, der, other, kMat, 1e-6), ShapeError);
  EXPECT_THROW(parse_data_family("vortex"), ConfigError);
}

TEST(Compat, ScalingDataScalesDerivedAccelerationsLinearlyForDilation) {
  auto m = fsi::testing::small_annulus();
  const auto a = generate_compatible_data(DataFamily::SolidDilation, 0.1, m, kMat).second;
  const auto b = generate_compatible_data(DataFamily::SolidDilation, 0.2, m, kMat).second;
  EXPECT_LT((b.u2.values - 2.0 * a.u2.values).norm(), 1e-9 * (1.0 + b.u2.values.norm()));
}

TEST(Dependence, CombineIsAffine) {
  auto m = fsi::testing::small_annulus();
  const auto a = generate_compatible_data(DataFamily::TangentialSwirl, 0.01, m, kMat).first;
  const auto b = generate_compatible_data(DataFamily::TangentialSwirl, 1.0, m, kMat).first;
  const InitialData c = combine(a, b, 0.5);
  EXPECT_LT((c.v0.values - (a.v0.values + 0.5 * b.v0.values)).norm(), 1e-15);
  EXPECT_EQ(data_difference_norm(a, a), 0.0);
  EXPECT_GT(data_difference_norm(a, c), 0.0);
}

TEST(Dependence, IdenticalDataIsGuardedAndSwapIsSymmetric) {
  const MeshPtr& m = shared_mesh();
  const auto a = generate_compatible_data(DataFamily::TangentialSwirl, 0.01, m, kMat).first;
  const auto b = generate_compatible_data(DataFamily::TangentialSwirl, 0.02, m, kMat).first;
  const Solution& sa = swirl_run(0.01);
  const Solution& sb = swirl_run(0.02);
  const DependenceResult same = compare_solutions(sa, sa, a, a, 1e-8);
  EXPECT_TRUE(same.guarded);
  EXPECT_EQ(same.ratio, 0.0);
  const DependenceResult ab = compare_solutions(sa, sb, a, b, 1e-8), ba = compare_solutions(sb, sa, b, a, 1e-8);
  EXPECT_FALSE(ab.guarded);
  EXPECT_GT(ab.ratio, 0.0);
  EXPECT_NEAR(ab.ratio, ba.ratio, 1e-12 * ab.ratio);
}
