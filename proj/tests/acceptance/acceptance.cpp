// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsi/compat.hpp"
#include "fsi/coupling.hpp"
#include "fsi/dependence.hpp"
#include "fsi/elastic.hpp"
#include "fsi/errors.hpp"
#include "fsi/fixed_point.hpp"
#include "fsi/inequalities.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/mechanics.hpp"
#include "fsi/mms.hpp"
#include "fsi/runner.hpp"

using namespace fsi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const MaterialParams kBaseline{0.1, 1.0, 2.0, 1.0, 0.5};
const MaterialParams kMmsMaterial{1.0, 1.0, 2.0, 1.0, 0.5};
constexpr double kTol = 1e-8;

FixedPointConfig baseline_config(double T, double dt) {
  FixedPointConfig cfg;
  cfg.T = T;
  cfg.dt = dt;
  cfg.tol_inner = kTol;
  cfg.tol_outer = kTol;
  return cfg;
}

MeshPtr annulus(double h) {
  GeometrySpec g;
  g.h = h;
  return build_reference_mesh(g);
}

// Coupled swirl runs shared by the outer fixed point and energy criteria.
const Solution& swirl_solution(double h, double dt) {
  static std::map<std::pair<double, double>, Solution> cache;
  auto key = std::make_pair(h, dt);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  MeshPtr mesh = annulus(h);
  auto data = generate_compatible_data(DataFamily::TangentialSwirl, 0.01, mesh, kBaseline).first;
  return cache.emplace(key, outer_fixed_point(data, mesh, kBaseline, baseline_config(0.1, dt))).first->second;
}

Outcome tensor_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = tensor_identity_suite(1000, 20240601);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = r.samples == 1000 && r.max_cof_transpose_error <= 1e-10 && r.max_cof_inverse_error <= 1e-10 && secs < 5.0;
  o.detail = "cof*F^T err " + fmt("%.2e", r.max_cof_transpose_error) + ", cof vs J F^-T err " +
             fmt("%.2e", r.max_cof_inverse_error) + ", " + fmt("%.3f", secs) + " s";
  return o;
}

Outcome piola_condition() {
  const auto t0 = std::chrono::steady_clock::now();
  MeshPtr base = annulus(0.25);
  const SpacePtr V0 = fluid_velocity_space(base);
  const FieldSnapshot affine = interpolate_vector(
      V0,
      [](const SmallVec& X, double) {
        SmallVec y(2);
        y << 1.3 * X(0) + 0.2 * X(1) + 0.5, -0.4 * X(0) + 0.9 * X(1) - 1.0;
        return y;
      },
      0.0);
  const double affine_res = piola_condition_residual(deformation_from_map(affine).cof);
  std::vector<double> hs{0.25, 0.125, 0.0625, 0.03125}, res;
  for (double h : hs) {
    const SpacePtr V = fluid_velocity_space(annulus(h));
    const FieldSnapshot chi = interpolate_vector(
        V,
        [](const SmallVec& X, double) {
          SmallVec y = X;
          y(0) += 0.1 * std::sin(X(1));
          y(1) += 0.1 * X(0) * std::cos(X(0));
          return y;
        },
        0.0);
    res.push_back(piola_condition_residual(deformation_from_map(chi).cof));
  }
  const double order = loglog_slope(hs, res);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = affine_res < 1e-12 && order >= 1.8 && secs < 60.0;
  o.detail = "affine " + fmt("%.2e", affine_res) + ", perturbed order " + fmt("%.3f", order) + ", " +
             fmt("%.2f", secs) + " s";
  return o;
}

Outcome inverse_rate() {
  MeshPtr mesh = annulus(0.25);
  const SpacePtr V = fluid_velocity_space(mesh);
  const double alpha = 0.5;
  std::vector<double> dts{0.1, 0.05, 0.025, 0.0125}, res;
  for (double dt : dts) {
    const int N = static_cast<int>(std::lround(1.0 / dt));
    Trajectory F, v;
    F.dt = v.dt = dt;
    for (int n = 0; n <= N; ++n) {
      const double t = n * dt;
      const FieldSnapshot chi =
          interpolate_vector(V, [&](const SmallVec& X, double s) { return SmallVec((1.0 + alpha * s) * X); }, t);
      F.levels.push_back(deformation_from_map(chi).F);
      v.levels.push_back(interpolate_vector(V, [&](const SmallVec& X, double) { return SmallVec(alpha * X); }, t));
    }
    double mx = 0.0;
    for (double r : inverse_rate_residual(F, v)) mx = std::max(mx, r);
    res.push_back(mx);
  }
  const double order = loglog_slope(dts, res);
  return {order >= 1.8, "dilation flow order " + fmt("%.3f", order) + ", finest residual " + fmt("%.2e", res.back())};
}

Outcome manufactured_solutions() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> hs{0.25, 0.125, 0.0625};
  const MmsStudy e = mms_elastic(hs, kMmsMaterial);
  const MmsStudy s = mms_stokes(hs, kMmsMaterial);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = e.order >= 1.8 && s.order >= 1.8 && s.secondary_order >= 0.8 && secs < 600.0;
  o.detail = "elastic u " + fmt("%.3f", e.order) + ", Stokes v " + fmt("%.3f", s.order) + ", p " +
             fmt("%.3f", s.secondary_order) + ", " + fmt("%.2f", secs) + " s";
  return o;
}

Outcome frozen_reductions() {
  MeshPtr mesh = annulus(0.25);
  const SpacePtr S = solid_space(mesh), V = fluid_velocity_space(mesh), P = fluid_pressure_space(mesh);
  const TimeWindow win{0.0, 0.03, 0.01};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto random_field = [&](const SpacePtr& sp, int nc, double t) {
    FieldSnapshot f(sp, nc, t);
    for (int i = 0; i < f.values.size(); ++i) f.values(i) = U(rng);
    return f;
  };
  SolidTrajectory solid;
  Trajectory v, p;
  solid.u.dt = v.dt = p.dt = win.dt;
  for (int n = 0; n <= win.steps(); ++n) {
    const double t = win.time(n);
    solid.u.levels.push_back(random_field(S, 2, t));
    v.levels.push_back(random_field(V, 2, t));
    p.levels.push_back(random_field(P, 1, t));
  }
  const DeformationTrajectory id = seed_deformation(FieldSnapshot(V, 2, 0.0), win);
  const Trajectory g = forcing_g(v, id), f = forcing_f(v, p, id, kBaseline), d = forcing_d(solid, v, p, id, kBaseline);
  const Trajectory Pn = interface_traction(solid.u, kBaseline);
  double eg = 0.0, ef = 0.0, ed = 0.0;
  for (int n = 0; n < v.num_levels(); ++n) {
    eg = std::max(eg, g[n].values.cwiseAbs().maxCoeff());
    ef = std::max(ef, f[n].values.cwiseAbs().maxCoeff());
    ed = std::max(ed, (d[n].values - Pn[n].values).cwiseAbs().maxCoeff());
  }
  return {eg <= 1e-12 && ef <= 1e-12 && ed <= 1e-12,
          "max|g| " + fmt("%.1e", eg) + ", max|f| " + fmt("%.1e", ef) + ", max|d - P(u)n| " + fmt("%.1e", ed)};
}

double inner_ratio(const MeshPtr& mesh, const InitialData& data, const DerivedData& der, double T, double dt,
                   int* iterations = nullptr) {
  FixedPointConfig cfg = baseline_config(T, dt);
  cfg.track_energy = false;
  CoupledSolvers solvers(mesh, kBaseline, dt);
  const auto chi = seed_deformation(data.v0, TimeWindow{0.0, T, dt});
  const InnerResult r = inner_fixed_point(solvers, chi, data, &der, cfg);
  if (iterations) *iterations = r.report.inner_iterations();
  return r.report.inner_iterations() >= 2 ? contraction_estimate(r.report.inner_increments) : 0.0;
}

Outcome inner_fixed_point_contraction() {
  MeshPtr mesh = annulus(0.25);
  const auto [data, der] = generate_compatible_data(DataFamily::TangentialSwirl, 0.01, mesh, kBaseline);
  const double r1 = inner_ratio(mesh, data, der, 0.1, 0.0125);
  const double r2 = inner_ratio(mesh, data, der, 0.05, 0.0125);
  const auto [zero, zder] = generate_compatible_data(DataFamily::Zero, 0.0, mesh, kBaseline);
  int zero_iters = -1;
  inner_ratio(mesh, zero, zder, 0.1, 0.0125, &zero_iters);
  return {r1 < 1.0 && r2 <= r1 && zero_iters == 1,
          "ratio T=0.1 " + fmt("%.4f", r1) + ", T=0.05 " + fmt("%.4f", r2) + ", zero-data iterations " +
              std::to_string(zero_iters)};
}

Outcome outer_fixed_point_solution() {
  const Solution& coarse = swirl_solution(0.25, 0.0125);
  const Solution& fine = swirl_solution(0.125, 0.00625);
  const double jdev = coarse.max_J_deviation();
  return {jdev <= 1e-3 && coarse.interface_mismatch <= 10 * kTol && fine.piola_residual < coarse.piola_residual &&
              coarse.report.accepted_T == 0.1,
          "max|J-1| " + fmt("%.2e", jdev) + ", interface mismatch " + fmt("%.2e", coarse.interface_mismatch) +
              ", Piola " + fmt("%.2e", coarse.piola_residual) + " -> " + fmt("%.2e", fine.piola_residual)};
}

Outcome energy_balance() {
  const double a = std::abs(swirl_solution(0.25, 0.0125).energy.integrated_residual);
  const double b = std::abs(swirl_solution(0.125, 0.00625).energy.integrated_residual);
  const double drop = a / b;
  return {drop >= 3.0, "integrated residual " + fmt("%.2e", a) + " -> " + fmt("%.2e", b) + ", drop " +
                           fmt("%.2f", drop) + "x"};
}

Outcome compatibility_round_trip() {
  MeshPtr mesh = annulus(0.25);
  double worst = 0.0;
  bool all = true;
  for (auto fam : {DataFamily::Zero, DataFamily::SolidDilation, DataFamily::TangentialSwirl}) {
    const auto [data, der] = generate_compatible_data(fam, fam == DataFamily::SolidDilation ? 0.1 : 0.01, mesh, kBaseline);
    const CompatReport r = check_compatibility(data, der, mesh, kBaseline, 1e-6);
    all = all && r.all_pass();
    for (double x : {r.residual_i_tractionB, r.residual_i_velmatch, r.residual_ii_div, r.residual_iii}) worst = std::max(worst, x);
    for (double x : r.residual_iv) worst = std::max(worst, x);
  }
  const auto [bad, bder] = flux_violating_fixture(0.1, mesh, kBaseline);
  const auto failed = check_compatibility(bad, bder, mesh, kBaseline, 1e-6).failed_conditions();
  const bool names_iv = std::find(failed.begin(), failed.end(), "(iv)") != failed.end();
  std::string names;
  for (const auto& f : failed) names += (names.empty() ? "" : " ") + f;
  return {all && worst <= 1e-6 && names_iv,
          "worst residual " + fmt("%.2e", worst) + ", fixture rejected with " + names};
}

Outcome continuous_dependence() {
  MeshPtr mesh = annulus(0.25);
  FixedPointConfig cfg = baseline_config(0.1, 0.0125);
  cfg.track_energy = false;
  const auto base = generate_compatible_data(DataFamily::TangentialSwirl, 0.01, mesh, kBaseline).first;
  const auto pert = generate_compatible_data(DataFamily::TangentialSwirl, 1.0, mesh, kBaseline).first;
  const DependenceSweep sw = dependence_sweep(base, pert, {0.004, 0.002, 0.001}, mesh, kBaseline, cfg);
  return {sw.ratio_variation < 0.25 && sw.slope >= 0.9,
          "ratio variation " + fmt("%.2f", 100 * sw.ratio_variation) + "%, slope " + fmt("%.3f", sw.slope)};
}

Outcome inequality_harness_stability() {
  const std::vector<double> grid{0.25, 0.5, 1.0};
  double worst_growth = 0.0;
  bool finite = true;
  for (LemmaId id : {LemmaId::I1, LemmaId::I2, LemmaId::HOLDER_ST}) {
    InequalityParams P;
    if (id == LemmaId::I2) P.theta = 1.5;
    const double a = inequality_harness(id, P, 100, grid, 7).overall_max();
    const double b = inequality_harness(id, P, 1000, grid, 7).overall_max();
    finite = finite && std::isfinite(a) && std::isfinite(b) && a > 0.0;
    worst_growth = std::max(worst_growth, b / a - 1.0);
  }
  double worst_exp = 0.0;
  for (auto [sigma, s] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {1.0, 0.0}, {0.75, 0.25}}) {
    InequalityParams P;
    P.sigma = sigma;
    P.s = s;
    const auto r = inequality_harness(LemmaId::TSIGMA, P, 100, {1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16}, 3);
    finite = finite && std::isfinite(r.overall_max());
    worst_exp = std::max(worst_exp, std::abs(r.fitted_exponent - (sigma - s)));
  }
  return {finite && worst_growth < 0.10 && worst_exp <= 0.1,
          "max growth x10 samples " + fmt("%.2f", 100 * worst_growth) + "%, worst TSIGMA exponent error " +
              fmt("%.3f", worst_exp)};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("fsi_acceptance_" + std::to_string(std::random_device{}()));
  std::string csv[2];
  int codes[2];
  for (int k = 0; k < 2; ++k) {
    std::ostringstream text;
    text << "[geometry]\nh = 0.25\n[time]\nT = 0.05\ndt = 0.0125\n[data]\nfamily = tangential-swirl\namplitude = 0.01\n"
         << "[output]\ndirectory = " << (root / ("run" + std::to_string(k))).string() << "\n[run]\nseed = 5\n";
    const fs::path cfg = root / ("run" + std::to_string(k) + ".ini");
    fs::create_directories(root);
    std::ofstream(cfg) << text.str();
    std::ostringstream out, err;
    codes[k] = run("simulate", cfg.string(), out, err);
    std::ifstream is(root / ("run" + std::to_string(k)) / "iterations.csv", std::ios::binary);
    csv[k].assign(std::istreambuf_iterator<char>(is), {});
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  const bool same = !csv[0].empty() && csv[0] == csv[1];
  return {codes[0] == 0 && codes[1] == 0 && same,
          std::string("exit codes ") + std::to_string(codes[0]) + "/" + std::to_string(codes[1]) + ", " +
              std::to_string(csv[0].size()) + " bytes, " + (same ? "identical" : "different")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria{
      {"tensor identities", tensor_identities},
      {"Piola condition", piola_condition},
      {"inverse-rate identity", inverse_rate},
      {"manufactured solutions", manufactured_solutions},
      {"frozen-deformation reductions", frozen_reductions},
      {"inner fixed point", inner_fixed_point_contraction},
      {"outer fixed point", outer_fixed_point_solution},
      {"energy balance", energy_balance},
      {"compatibility round trip", compatibility_round_trip},
      {"continuous dependence", continuous_dependence},
      {"inequality harness", inequality_harness_stability},
      {"determinism", determinism},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
