#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fsi/assembly.hpp"
#include "fsi/elastic.hpp"
#include "fsi/errors.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/mesh.hpp"
#include "fsi/operators.hpp"
#include "fsi/quadrature.hpp"
#include "fsi/vtk.hpp"
#include "generators.hpp"

using namespace fsi;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Exact integral of x^a y^b (z^c) over the unit reference simplex.
double simplex_monomial(int dim, int a, int b, int c) {
  return dim == 2 ? factorial(a) * factorial(b) / factorial(a + b + 2)
                  : factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

}  // namespace

TEST(Quadrature, ExactForMonomialsUpToDesignDegree) {
  for (int dim : {2, 3}) {
    for (int n = 1; n <= 5; ++n) {
      const int deg = 2 * n - dim;
      if (deg < 0) continue;
      const auto& rule = simplex_rule(dim, n);
      const double measure = dim == 2 ? 0.5 : 1.0 / 6.0;
      double wsum = 0.0;
      for (double w : rule.weights) wsum += w;
      EXPECT_NEAR(wsum, 1.0, 1e-14);
      for (int a = 0; a <= deg; ++a)
        for (int b = 0; a + b <= deg; ++b)
          for (int c = 0; a + b + c <= deg; ++c) {
            if (dim == 2 && c > 0) continue;
            double q = 0.0;
            for (int k = 0; k < rule.size(); ++k) {
              const auto& l = rule.barycentric[k];
              q += rule.weights[k] * std::pow(l(1), a) * std::pow(l(2), b) * (dim == 3 ? std::pow(l(3), c) : 1.0);
            }
            EXPECT_NEAR(q * measure, simplex_monomial(dim, a, b, c), 1e-14) << dim << " " << n << " " << a << b << c;
          }
      EXPECT_GE(2 * quadrature_points_for(dim, deg) - dim, deg);
    }
  }
}

TEST(Quadrature, GaussLegendreIntegratesPolynomials) {
  std::vector<double> x, w;
  gauss_legendre_01(4, x, w);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 7);
  EXPECT_NEAR(s, 1.0 / 8.0, 1e-15);
}

TEST(Mesh, AnnulusMeasuresConverge) {
  double prev = 1.0;
  for (double h : {0.5, 0.25, 0.125}) {
    auto m = fsi::testing::small_annulus(h);
    const double err = std::abs(m->region_measure(Region::Solid) - 3.0 * std::numbers::pi);
    EXPECT_LT(err, prev);
    prev = err;
    // inscribed polygons: chord error O(h^2)
    EXPECT_NEAR(m->boundary_measure(BoundaryTag::GammaL), 2 * std::numbers::pi, h * h);
    EXPECT_NEAR(m->boundary_measure(BoundaryTag::GammaB), 4 * std::numbers::pi, h * h);
    EXPECT_TRUE(has_tag(*m, BoundaryTag::GammaL));
    for (int c = 0; c < m->num_cells(); ++c) EXPECT_GT(m->cell_volume(c), 0.0);
  }
}

TEST(Mesh, NormalsPointOutOfFluidOnInterface) {
  auto m = fsi::testing::small_annulus();
  for (const auto& f : m->facets()) {
    SmallVec mid = SmallVec::Zero(2);
    for (int k = 0; k < 2; ++k) mid += 0.5 * m->vertex(f.vertices[k]);
    EXPECT_GT(f.normal.dot(mid), 0.0);  // radial outward for both tags
    EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
  }
}

TEST(Mesh, StripHasNoInterfaceAndShellIsThreeDimensional) {
  GeometrySpec g;
  g.family = GeometrySpec::Family::Strip;
  g.h = 0.5;
  auto strip = build_reference_mesh(g);
  EXPECT_FALSE(has_tag(*strip, BoundaryTag::GammaL));
  EXPECT_NEAR(strip->region_measure(Region::Solid), g.length * g.height, 1e-12);
  g.family = GeometrySpec::Family::Shell;
  g.h = 0.75;
  auto shell = build_reference_mesh(g);
  EXPECT_EQ(shell->dim(), 3);
  EXPECT_TRUE(has_tag(*shell, BoundaryTag::GammaL));
}

TEST(Mesh, RejectsBadGeometry) {
  GeometrySpec g;
  g.r_inner = 2.0;
  EXPECT_THROW(build_reference_mesh(g), MeshError);
  g = GeometrySpec{};
  g.h = -1.0;
  EXPECT_THROW(build_reference_mesh(g), MeshError);
  EXPECT_THROW(GeometrySpec::parse_family("torus"), ConfigError);
}

TEST(Mesh, TextFormatRoundTrip) {
  auto m = fsi::testing::small_annulus();
  std::stringstream ss;
  write_mesh(ss, *m);
  auto back = read_mesh(ss);
  EXPECT_EQ(back->num_vertices(), m->num_vertices());
  EXPECT_EQ(back->num_cells(), m->num_cells());
  EXPECT_EQ(back->facets().size(), m->facets().size());
  EXPECT_NEAR(back->boundary_measure(BoundaryTag::GammaL), m->boundary_measure(BoundaryTag::GammaL), 1e-12);
  std::stringstream bad("fsi-mesh 1\ndim 4\n");
  EXPECT_ANY_THROW(read_mesh(bad));
}

TEST(Assembly, MassSumsToAreaAndGradientKillsConstants) {
  auto m = fsi::testing::small_annulus();
  auto S = solid_space(m);
  const SpMat M = mass_matrix(*S), K = gradient_gram(*S);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(S->num_dofs());
  EXPECT_NEAR(one.dot(M * one), m->region_measure(Region::Solid), 1e-12);
  EXPECT_LT((K * one).norm(), 1e-12);
}

TEST(Assembly, ElasticityAnnihilatesRigidMotions) {
  auto m = fsi::testing::small_annulus();
  auto S = solid_space(m);
  const SpMat K = elasticity_matrix(*S, 2.0, 1.0);
  for (int mode = 0; mode < 3; ++mode) {
    FieldSnapshot r = interpolate_vector(
        S,
        [mode](const SmallVec& X, double) {
          SmallVec v(2);
          if (mode == 0) v << 1, 0;
          else if (mode == 1) v << 0, 1;
          else v << -X(1), X(0);
          return v;
        },
        0.0);
    EXPECT_LT((K * r.values).norm(), 1e-11);
  }
}

TEST(Assembly, DivergenceMatrixMatchesAnalyticFlux) {
  auto m = fsi::testing::small_annulus();
  auto V = fluid_velocity_space(m), P = fluid_pressure_space(m);
  const SpMat B = divergence_matrix(*P, *V);
  // v = X has div v = 2; sum_q B(q, v) = int div v = 2 * area
  FieldSnapshot v = interpolate_vector(V, [](const SmallVec& X, double) { return SmallVec(X); }, 0.0);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(P->num_dofs());
  EXPECT_NEAR(one.dot(B * v.values), 2.0 * m->region_measure(Region::Fluid), 1e-12);
}

TEST(Operators, NodalGradientReproducesCubics) {
  auto m = fsi::testing::small_annulus();
  auto V = fluid_velocity_space(m);
  auto cubic = [](const SmallVec& X, double) { return X(0) * X(0) * X(1) - 2 * X(1) * X(1) * X(1) + X(0); };
  const FieldSnapshot f = interpolate_scalar(V, cubic, 0.0);
  const FieldSnapshot g = NodalGradient::of(V)->scalar_gradient(f);
  for (int i = 0; i < V->num_dofs(); ++i) {
    const SmallVec X = V->dof_coord(i);
    EXPECT_NEAR(g.at(i, 0), 2 * X(0) * X(1) + 1, 1e-9);
    EXPECT_NEAR(g.at(i, 1), X(0) * X(0) - 6 * X(1) * X(1), 1e-9);
  }
}

TEST(Operators, NormsOfKnownFields) {
  auto m = fsi::testing::small_annulus(0.25);
  auto V = fluid_velocity_space(m);
  const FieldSnapshot one = interpolate_scalar(V, [](const SmallVec&, double) { return 1.0; }, 0.0);
  EXPECT_NEAR(discrete_norm(one, NormKind::L2), std::sqrt(m->region_measure(Region::Fluid)), 1e-12);
  EXPECT_NEAR(discrete_norm(one, NormKind::H1), discrete_norm(one, NormKind::L2), 1e-12);
  const FieldSnapshot lin = interpolate_scalar(V, [](const SmallVec& X, double) { return X(0); }, 0.0);
  // square root of a form that cancels to roundoff
  EXPECT_NEAR(discrete_norm(lin, NormKind::H2Seminorm), 0.0, 1e-5);
  EXPECT_THROW(parse_norm_kind("H7"), ConfigError);
}

TEST(Operators, TraceOfSolidFieldOnOuterBoundary) {
  auto m = fsi::testing::small_annulus();
  auto S = solid_space(m);
  const FieldSnapshot f = interpolate_vector(S, [](const SmallVec& X, double) { return SmallVec(X); }, 0.0);
  const FieldSnapshot tr = trace_extract(f, BoundaryTag::GammaB);
  for (int b = 0; b < tr.num_dofs(); ++b) {
    EXPECT_LT((tr.vector_at(b) - tr.space->dof_coord(b)).norm(), 1e-14);
    EXPECT_NEAR(tr.vector_at(b).norm(), 2.0, 0.05);
  }
  auto V = fluid_velocity_space(m);
  EXPECT_THROW(trace_extract(FieldSnapshot(V, 2, 0.0), BoundaryTag::GammaB), ShapeError);
}

TEST(Kinematics, AffineMapHasExactGradientAndNoPiolaResidual) {
  auto m = fsi::testing::small_annulus();
  auto V = fluid_velocity_space(m);
  const Tensor2 A = fsi::testing::random_deformation(2);
  const FieldSnapshot chi = interpolate_vector(V, [&](const SmallVec& X, double) { return SmallVec(A * X); }, 0.0);
  const auto s = deformation_from_map(chi);
  for (int i = 0; i < V->num_dofs(); i += 7) EXPECT_LT((s.F.tensor_at(i) - A).norm(), 1e-10);
  EXPECT_LT(piola_condition_residual(s.cof), 1e-10);
}

TEST(Kinematics, FoldedMapIsDegenerate) {
  auto m = fsi::testing::small_annulus();
  auto V = fluid_velocity_space(m);
  const FieldSnapshot chi = interpolate_vector(
      V, [](const SmallVec& X, double) { SmallVec y(2); y << -X(0), X(1); return y; }, 0.0);
  EXPECT_THROW(deformation_from_map(chi), DegenerateDeformation);
}

TEST(Vtk, LegacyFileStructure) {
  auto m = fsi::testing::small_annulus();
  auto V = fluid_velocity_space(m);
  auto P = fluid_pressure_space(m);
  const FieldSnapshot v = fsi::testing::random_field(V, 2);
  const FieldSnapshot p = fsi::testing::random_field(P, 1);
  std::stringstream ss;
  write_vtk(ss, *m, {{"v", &v}, {"p", &p}});
  const std::string s = ss.str();
  EXPECT_EQ(s.rfind("# vtk DataFile Version 2.0", 0), 0u);
  EXPECT_NE(s.find("POINTS " + std::to_string(m->num_nodes(2)) + " double"), std::string::npos);
  EXPECT_NE(s.find("CELLS " + std::to_string(m->num_cells()) + " " + std::to_string(7 * m->num_cells())),
            std::string::npos);
  EXPECT_NE(s.find("VECTORS v double"), std::string::npos);
  EXPECT_NE(s.find("SCALARS p double 1"), std::string::npos);
  // Every quadratic triangle lists its corner vertices before its midpoints.
  std::istringstream is(s.substr(s.find("CELLS")));
  std::string line;
  std::getline(is, line);
  int n, ids[6];
  is >> n >> ids[0] >> ids[1] >> ids[2] >> ids[3] >> ids[4] >> ids[5];
  EXPECT_EQ(n, 6);
  EXPECT_LT(ids[2], m->num_vertices());
  EXPECT_EQ(m->find_edge(ids[0], ids[1]) + m->num_vertices(), ids[3]);
  EXPECT_EQ(m->find_edge(ids[1], ids[2]) + m->num_vertices(), ids[4]);
  EXPECT_EQ(m->find_edge(ids[2], ids[0]) + m->num_vertices(), ids[5]);
}
