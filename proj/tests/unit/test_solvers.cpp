#include <gtest/gtest.h>

#include <cmath>

#include "fsi/elastic.hpp"
#include "fsi/energy.hpp"
#include "fsi/errors.hpp"
#include "fsi/operators.hpp"
#include "fsi/stokes.hpp"
#include "generators.hpp"

using namespace fsi;

namespace {

const MaterialParams kMat{1.0, 1.0, 2.0, 1.0, 0.5};

ElasticProblem free_vibration(const MeshPtr& m, double dt, int steps) {
  ElasticProblem pb;
  pb.mesh = m;
  pb.mat = kMat;
  pb.window = TimeWindow{0.0, dt * steps, dt};
  auto S = solid_space(m);
  pb.u0 = fsi::testing::random_field(S, 2, 0.0, 0.01);
  pb.u1 = FieldSnapshot(S, 2, 0.0);
  return pb;
}

}  // namespace

TEST(Elastic, ZeroDataStaysZero) {
  auto m = fsi::testing::small_annulus();
  ElasticProblem pb = free_vibration(m, 0.05, 4);
  pb.u0.values.setZero();
  const SolidTrajectory s = solve_elastic(pb);
  ASSERT_EQ(s.u.num_levels(), 5);
  for (const auto& l : s.u.levels) EXPECT_EQ(l.values.norm(), 0.0);
}

TEST(Elastic, AverageAccelerationConservesEnergy) {
  auto m = fsi::testing::small_annulus();
  const SolidTrajectory s = solve_elastic(free_vibration(m, 0.05, 20));
  const EnergyReport e = energy_report(s, FluidTrajectory{}, kMat);
  const double E0 = e.total.front();
  ASSERT_GT(E0, 0.0);
  for (double E : e.total) EXPECT_NEAR(E, E0, 1e-6 * E0);
}

TEST(Elastic, ConstrainedInterfaceFollowsPrescribedVelocity) {
  auto m = fsi::testing::small_annulus();
  ElasticProblem pb = free_vibration(m, 0.05, 4);
  pb.u0.values.setZero();
  const SpacePtr bs = boundary_space(m, BoundaryTag::GammaL, 2);
  const auto w = [](const SmallVec& X, double t) { return SmallVec(std::cos(t) * 0.01 * X); };
  pb.gamma_L_velocity.dt = pb.window.dt;
  for (int n = 0; n <= 4; ++n) pb.gamma_L_velocity.levels.push_back(interpolate_vector(bs, w, pb.window.time(n)));
  pb.u1 = interpolate_vector(solid_space(m), [&](const SmallVec& X, double) { return w(X, 0.0); }, 0.0);
  const SolidTrajectory s = solve_elastic(pb);
  const Trajectory ut = trace_extract(s.u_t, BoundaryTag::GammaL);
  for (int n = 0; n <= 4; ++n)
    EXPECT_LT((ut[n].values - pb.gamma_L_velocity[n].values).cwiseAbs().maxCoeff(), 1e-12);
  pb.u1.values *= 2.0;
  EXPECT_THROW(solve_elastic(pb), CompatibilityError);
}

TEST(Elastic, RejectsMismatchedStep) {
  auto m = fsi::testing::small_annulus();
  ElasticSolver solver(m, kMat, 0.1);
  EXPECT_THROW(solver.solve(free_vibration(m, 0.05, 2)), ConfigError);
}

TEST(Stokes, ZeroDataGivesZeroSolution) {
  auto m = fsi::testing::small_annulus();
  StokesProblem pb;
  pb.mesh = m;
  pb.mat = kMat;
  pb.window = TimeWindow{0.0, 0.1, 0.05};
  pb.v0 = FieldSnapshot(fluid_velocity_space(m), 2, 0.0);
  const FluidTrajectory f = solve_stokes(pb);
  ASSERT_EQ(f.v.num_levels(), 3);
  for (int n = 0; n < 3; ++n) {
    EXPECT_LT(f.v[n].values.norm(), 1e-14);
    EXPECT_LT(f.p[n].values.norm(), 1e-14);
  }
}

TEST(Stokes, SolutionIsLinearInTheLoads) {
  auto m = fsi::testing::small_annulus();
  const double dt = 0.05;
  StokesSolver solver(m, kMat, dt);
  const TimeWindow win{0.0, 0.1, dt};
  const SpacePtr V = solver.velocity_space(), P = solver.pressure_space();
  auto make = [&](double scale_seed) {
    StokesProblem pb;
    pb.mesh = m;
    pb.mat = kMat;
    pb.window = win;
    pb.v0 = FieldSnapshot(V, 2, 0.0);
    WeakLoads L;
    for (int n = 0; n <= 2; ++n) {
      L.momentum.push_back(fsi::testing::random_field(V, 2, 0.0, scale_seed).values);
      Eigen::VectorXd c = Eigen::VectorXd::Zero(P->num_dofs());
      if (n > 0) c = fsi::testing::random_field(P, 1, 0.0, scale_seed).values;
      L.constraint.push_back(c);
    }
    pb.loads = L;
    pb.p0 = FieldSnapshot(P, 1, 0.0);
    return pb;
  };
  StokesProblem a = make(1.0), b = make(1.0), ab = a;
  for (int n = 0; n <= 2; ++n) {
    ab.loads->momentum[n] = 2.0 * a.loads->momentum[n] - 3.0 * b.loads->momentum[n];
    ab.loads->constraint[n] = 2.0 * a.loads->constraint[n] - 3.0 * b.loads->constraint[n];
  }
  const auto sa = solver.solve(a), sb = solver.solve(b), sab = solver.solve(ab);
  for (int n = 0; n <= 2; ++n) {
    const Eigen::VectorXd lin = 2.0 * sa.v[n].values - 3.0 * sb.v[n].values;
    EXPECT_LT((sab.v[n].values - lin).norm(), 1e-9 * (1.0 + lin.norm()));
  }
}

TEST(Stokes, RejectsIncompatibleInitialVelocity) {
  auto m = fsi::testing::small_annulus();
  StokesProblem pb;
  pb.mesh = m;
  pb.mat = kMat;
  pb.window = TimeWindow{0.0, 0.1, 0.05};
  pb.v0 = interpolate_vector(fluid_velocity_space(m), [](const SmallVec& X, double) { return SmallVec(X); }, 0.0);
  EXPECT_THROW(solve_stokes(pb), CompatibilityError);
}

TEST(Energy, ZeroSolutionHasZeroSeries) {
  auto m = fsi::testing::small_annulus();
  const SpacePtr S = solid_space(m), V = fluid_velocity_space(m), P = fluid_pressure_space(m);
  SolidTrajectory s;
  s.u = Trajectory::zeros(S, 2, 0.0, 0.1, 3);
  s.u_t = s.u;
  FluidTrajectory f;
  f.v = Trajectory::zeros(V, 2, 0.0, 0.1, 3);
  f.p = Trajectory::zeros(P, 1, 0.0, 0.1, 3);
  const EnergyReport e = energy_report(s, f, kMat);
  for (int n = 0; n < 3; ++n) {
    EXPECT_EQ(e.total[n], 0.0);
    EXPECT_EQ(e.dissipation[n], 0.0);
    EXPECT_EQ(e.balance_residual[n], 0.0);
  }
  EXPECT_EQ(e.to_csv().substr(0, e.to_csv().find('\n')),
            "t,kinetic_fluid,kinetic_solid,elastic_div,elastic_strain,dissipation,residual");
  f.v = Trajectory::zeros(V, 2, 0.0, 0.05, 3);
  EXPECT_THROW(energy_report(s, f, kMat), ShapeError);
}

TEST(Energy, TermsAreNonnegativeForRandomStates) {
  auto m = fsi::testing::small_annulus();
  const SpacePtr S = solid_space(m), V = fluid_velocity_space(m);
  SolidTrajectory s;
  FluidTrajectory f;
  s.u.dt = s.u_t.dt = f.v.dt = 0.1;
  for (int n = 0; n < 4; ++n) {
    s.u.levels.push_back(fsi::testing::random_field(S, 2, 0.1 * n));
    s.u_t.levels.push_back(fsi::testing::random_field(S, 2, 0.1 * n));
    f.v.levels.push_back(fsi::testing::random_field(V, 2, 0.1 * n));
  }
  const EnergyReport e = energy_report(s, f, kMat);
  for (int n = 0; n < 4; ++n) {
    for (double x : {e.kinetic_fluid[n], e.kinetic_solid[n], e.elastic_div[n], e.elastic_strain[n],
                     e.dissipation_rate[n], e.dissipation[n]})
      EXPECT_GE(x, 0.0);
  }
}
