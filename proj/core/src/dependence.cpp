#include "fsi/dependence.hpp"

#include <algorithm>
#include <cmath>

#include "fsi/errors.hpp"
#include "fsi/inequalities.hpp"
#include "fsi/operators.hpp"

namespace fsi {

namespace {

FieldSnapshot diff(const FieldSnapshot& a, const FieldSnapshot& b, double s = -1.0) {
  a.check_compatible(b, "data fields");
  FieldSnapshot d = a;
  d.values += s * b.values;
  return d;
}

double solid_norm(const SolidTrajectory& a, const SolidTrajectory& b) {
  if (a.u.empty()) return 0.0;
  double x = time_max(difference(a.u, b.u), NormKind::H2);
  double y = time_max(difference(a.u_t, b.u_t), NormKind::H1);
  double z = time_max(difference(a.u_tt, b.u_tt), NormKind::L2);
  return std::sqrt(x * x + y * y + z * z);
}

}  // namespace

InitialData combine(const InitialData& a, const InitialData& b, double s) {
  return InitialData{diff(a.u0, b.u0, s), diff(a.u1, b.u1, s), diff(a.v0, b.v0, s)};
}

double data_difference_norm(const InitialData& a, const InitialData& b) {
  double dv = discrete_norm(diff(a.v0, b.v0), NormKind::H2);
  double du0 = discrete_norm(diff(a.u0, b.u0), NormKind::H2);
  double du1 = fractional_norm_estimate(diff(a.u1, b.u1), 1.5);
  return (1.0 + dv) * dv + du0 + du1;
}

double solution_difference_norm(const Solution& a, const Solution& b) {
  return solid_norm(a.solid, b.solid) + velocity_pressure_norm(difference(a.fluid.v, b.fluid.v), difference(a.fluid.p, b.fluid.p));
}

DependenceResult compare_solutions(const Solution& sa, const Solution& sb, const InitialData& a, const InitialData& b,
                                   double tol) {
  if (std::abs(sa.report.accepted_T - sb.report.accepted_T) > 1e-12)
    throw ConfigError("dependence runs accepted different windows");
  DependenceResult r;
  r.solution_difference = solution_difference_norm(sa, sb);
  r.data_difference = data_difference_norm(a, b);
  const double scale = std::max({1.0, velocity_pressure_norm(sa.fluid.v, sa.fluid.p)});
  if (r.data_difference <= tol * scale && r.solution_difference <= tol * scale) {
    r.guarded = true;
    r.ratio = 0.0;
  } else {
    r.ratio = r.solution_difference / r.data_difference;
  }
  return r;
}

DependenceResult dependence_experiment(const InitialData& a, const InitialData& b, const MeshPtr& mesh,
                                       const MaterialParams& mat, const FixedPointConfig& cfg) {
  Solution sa = outer_fixed_point(a, mesh, mat, cfg);
  Solution sb = outer_fixed_point(b, mesh, mat, cfg);
  return compare_solutions(sa, sb, a, b, std::max(cfg.tol_inner, cfg.tol_outer));
}

DependenceSweep dependence_sweep(const InitialData& base, const InitialData& perturbation, const std::vector<double>& eps,
                                 const MeshPtr& mesh, const MaterialParams& mat, const FixedPointConfig& cfg) {
  if (eps.size() < 2) throw ConfigError("dependence sweep needs at least two amplitudes");
  DependenceSweep out;
  out.eps = eps;
  Solution s0 = outer_fixed_point(base, mesh, mat, cfg);
  std::vector<double> sd;
  double rmin = INFINITY, rmax = 0.0;
  for (double e : eps) {
    InitialData b = combine(base, perturbation, e);
    Solution s1 = outer_fixed_point(b, mesh, mat, cfg);
    DependenceResult r = compare_solutions(s0, s1, base, b, std::max(cfg.tol_inner, cfg.tol_outer));
    out.results.push_back(r);
    sd.push_back(r.solution_difference);
    rmin = std::min(rmin, r.ratio);
    rmax = std::max(rmax, r.ratio);
  }
  out.slope = loglog_slope(eps, sd);
  out.ratio_variation = rmin > 0 ? rmax / rmin - 1.0 : INFINITY;
  return out;
}

}  // namespace fsi
