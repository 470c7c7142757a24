#include <gtest/gtest.h>

#include "fsi/coupling.hpp"
#include "fsi/elastic.hpp"
#include "fsi/fixed_point.hpp"
#include "generators.hpp"

using namespace fsi;

namespace {

const MaterialParams kMat{0.1, 1.0, 2.0, 1.0, 0.5};

struct CouplingState {
  MeshPtr mesh = fsi::testing::small_annulus();
  TimeWindow win{0.0, 0.02, 0.01};
  SolidTrajectory solid;
  Trajectory v, p;
  CouplingState() {
    const SpacePtr S = solid_space(mesh), V = fluid_velocity_space(mesh), P = fluid_pressure_space(mesh);
    solid.u.dt = v.dt = p.dt = win.dt;
    for (int n = 0; n <= win.steps(); ++n) {
      solid.u.levels.push_back(fsi::testing::random_field(S, 2, win.time(n)));
      v.levels.push_back(fsi::testing::random_field(V, 2, win.time(n)));
      p.levels.push_back(fsi::testing::random_field(P, 1, win.time(n)));
    }
  }
};

}  // namespace

TEST(Forcing, IdentityDeformationCollapsesForcing) {
  CouplingState s;
  const auto id = seed_deformation(FieldSnapshot(fluid_velocity_space(s.mesh), 2, 0.0), s.win);
  const Trajectory g = forcing_g(s.v, id), f = forcing_f(s.v, s.p, id, kMat);
  const Trajectory d = forcing_d(s.solid, s.v, s.p, id, kMat), Pn = interface_traction(s.solid.u, kMat);
  for (int n = 0; n < s.v.num_levels(); ++n) {
    EXPECT_LE(g[n].values.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(f[n].values.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((d[n].values - Pn[n].values).cwiseAbs().maxCoeff(), 1e-12);
  }
  const WeakLoads L = coupling_loads(s.solid, s.v, s.p, id, kMat, InterfaceLoad::Traction);
  for (const auto& c : L.constraint) EXPECT_LE(c.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Forcing, DivergenceForcingMatchesAffineOracle) {
  // chi = A X with constant A and v = B X: g = (I - cof A) : B everywhere.
  CouplingState s;
  const SpacePtr V = fluid_velocity_space(s.mesh);
  const Tensor2 A = fsi::testing::random_deformation(2), B = fsi::testing::random_tensor(2);
  DeformationTrajectory def;
  def.dt = s.win.dt;
  Trajectory v;
  v.dt = s.win.dt;
  for (int n = 0; n <= s.win.steps(); ++n) {
    def.levels.push_back(
        deformation_from_map(interpolate_vector(V, [&](const SmallVec& X, double) { return SmallVec(A * X); }, 0.0)));
    v.levels.push_back(interpolate_vector(V, [&](const SmallVec& X, double) { return SmallVec(B * X); }, s.win.time(n)));
  }
  def.velocity = v;
  const double expect = ddot(Tensor2(identity(2) - cofactor(A)), B);
  const Trajectory g = forcing_g(v, def);
  for (int i = 0; i < V->num_dofs(); i += 5) EXPECT_NEAR(g[1].values(i), expect, 1e-9);
}

TEST(Forcing, BundleCarriesIterationAndRejectsGridMismatch) {
  CouplingState s;
  const auto id = seed_deformation(FieldSnapshot(fluid_velocity_space(s.mesh), 2, 0.0), s.win);
  const ForcingBundle b = assemble_forcing(s.solid, s.v, s.p, id, kMat, 4, true, InterfaceLoad::Traction);
  EXPECT_EQ(b.source_iteration, 4);
  EXPECT_EQ(b.loads.momentum.size(), static_cast<size_t>(s.v.num_levels()));
  Trajectory shorter = s.v;
  shorter.levels.pop_back();
  EXPECT_ANY_THROW(forcing_g(shorter, id));
}
