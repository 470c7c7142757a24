#include <benchmark/benchmark.h>

#include "fsi/assembly.hpp"
#include "fsi/compat.hpp"
#include "fsi/elastic.hpp"
#include "fsi/fixed_point.hpp"
#include "fsi/mechanics.hpp"
#include "fsi/mesh.hpp"

using namespace fsi;

namespace {

const MaterialParams kMat{0.1, 1.0, 2.0, 1.0, 0.5};

MeshPtr annulus(double h) {
  GeometrySpec g;
  g.h = h;
  return build_reference_mesh(g);
}

void BM_Cofactor(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Tensor2 F = identity(d);
  F(0, 1) = 0.3;
  F(1, 0) = -0.2;
  for (auto _ : state) {
    Tensor2 C = cofactor(F);
    benchmark::DoNotOptimize(C);
  }
}
BENCHMARK(BM_Cofactor)->Arg(2)->Arg(3);

void BM_MassAssembly(benchmark::State& state) {
  auto m = annulus(1.0 / static_cast<double>(state.range(0)));
  auto s = solid_space(m);
  for (auto _ : state) benchmark::DoNotOptimize(mass_matrix(*s));
}
BENCHMARK(BM_MassAssembly)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ElasticityAssembly(benchmark::State& state) {
  auto m = annulus(1.0 / static_cast<double>(state.range(0)));
  auto s = solid_space(m);
  for (auto _ : state) benchmark::DoNotOptimize(elasticity_matrix(*s, kMat.lambda, kMat.mu_hat));
}
BENCHMARK(BM_ElasticityAssembly)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_StokesAssembly(benchmark::State& state) {
  auto m = annulus(1.0 / static_cast<double>(state.range(0)));
  auto v = fluid_velocity_space(m);
  auto p = fluid_pressure_space(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(viscous_matrix(*v, kMat.mu));
    benchmark::DoNotOptimize(divergence_matrix(*p, *v));
  }
}
BENCHMARK(BM_StokesAssembly)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

// whole outer/inner iteration on a coarse annulus, short window
void BM_OuterFixedPoint(benchmark::State& state) {
  auto m = annulus(0.5);
  auto data = generate_compatible_data(DataFamily::TangentialSwirl, 0.01, m, kMat).first;
  FixedPointConfig c;
  c.T = 0.05;
  c.dt = 0.0125;
  for (auto _ : state) benchmark::DoNotOptimize(outer_fixed_point(data, m, kMat, c));
}
BENCHMARK(BM_OuterFixedPoint)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
