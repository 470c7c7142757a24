#include "fsi/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fsi/errors.hpp"
#include "fsi/operators.hpp"

namespace fsi {

void FixedPointConfig::validate() const {
  if (!(dt > 0) || !(dt < T)) throw ConfigError("fixed point needs 0 < dt < T");
  if (!(tol_inner > 0) || !(tol_outer > 0)) throw ConfigError("fixed point tolerances must be positive");
  if (max_inner < 1 || max_outer < 1) throw ConfigError("fixed point iteration limits must be at least 1");
  if (!(shrink_factor > 0) || !(shrink_factor < 1)) throw ConfigError("shrink_factor must lie in (0, 1)");
  if (strikes < 1) throw ConfigError("strikes must be at least 1");
}

std::string IterationReport::iterations_csv() const {
  std::string out = "outer_k,inner_k,inner_increment,ratio,Jmin,Jmax,energy_residual\n";
  char buf[256];
  for (const auto& r : records) {
    char ratio[40] = "";
    if (r.has_ratio) std::snprintf(ratio, sizeof ratio, "%.10e", r.ratio);
    std::snprintf(buf, sizeof buf, "%d,%d,%.10e,%s,%.12f,%.12f,%.10e\n", r.outer_k, r.inner_k, r.inner_increment, ratio,
                  r.Jmin, r.Jmax, r.energy_residual);
    out += buf;
  }
  return out;
}

CoupledSolvers::CoupledSolvers(MeshPtr mesh, const MaterialParams& mat, double dt)
    : mesh_(mesh), mat_(mat), elastic_(mesh, mat, dt), stokes_(mesh, mat, dt) {}

double velocity_pressure_norm(const Trajectory& v, const Trajectory& p) {
  double s = 0.0;
  if (!v.empty()) {
    double a = time_l2(v, NormKind::H2);
    double b = time_l2(time_derivative(time_derivative(v)), NormKind::L2);
    s += a * a + b * b;
  }
  if (!p.empty()) {
    double a = time_l2(p, NormKind::H1);
    double b = time_l2(time_derivative(p), NormKind::L2);
    s += a * a + b * b;
  }
  return std::sqrt(s);
}

double flow_map_norm(const Trajectory& chi) {
  Trajectory c1 = time_derivative(chi);
  Trajectory c3 = time_derivative(time_derivative(c1));
  double a = time_l2(c1, NormKind::H2);
  double b = time_l2(c3, NormKind::L2);
  return std::sqrt(a * a + b * b);
}

namespace {

double relative(double inc, double norm) { return norm > 0 ? inc / norm : inc; }

std::string tail(const std::vector<double>& r) {
  std::ostringstream os;
  os.precision(4);
  std::size_t from = r.size() > 4 ? r.size() - 4 : 0;
  for (std::size_t i = from; i < r.size(); ++i) os << (i > from ? ", " : "") << r[i];
  return os.str();
}

}  // namespace

InnerResult inner_fixed_point(const CoupledSolvers& solvers, const DeformationTrajectory& chi_hat,
                              const InitialData& data, const DerivedData* derived, const FixedPointConfig& cfg,
                              int outer_k) {
  const MeshPtr& mesh = solvers.mesh();
  const MaterialParams& mat = solvers.material();
  TimeWindow window{0.0, cfg.T, cfg.dt};
  const int N = window.steps();
  if (std::abs(cfg.dt - solvers.dt()) > 1e-12 * cfg.dt) throw ConfigError("solver time step differs from configuration");
  if (chi_hat.num_levels() != N + 1) throw ShapeError("deformation trajectory does not cover the window");
  data.v0.check_compatible(chi_hat.velocity[0], "initial velocity and flow-map velocity");

  // Seed conditions chi(., t0) = X and d/dt chi(., t0) = v0.
  const double vscale = std::max(1.0, data.v0.values.lpNorm<Eigen::Infinity>());
  FieldSnapshot X = identity_map(chi_hat[0].chi.space, 0.0);
  if ((chi_hat[0].chi.values - X.values).lpNorm<Eigen::Infinity>() > 1e-10 * (1.0 + X.values.lpNorm<Eigen::Infinity>()))
    throw CompatibilityError("flow map does not start at the identity");
  if ((chi_hat.velocity[0].values - data.v0.values).lpNorm<Eigen::Infinity>() > 1e-10 * vscale)
    throw CompatibilityError("flow map velocity at t0 differs from v0");

  const SpacePtr& P = solvers.stokes().pressure_space();
  FieldSnapshot q0 = derived && derived->q0.space ? derived->q0 : FieldSnapshot(P, 1, 0.0);
  Trajectory vt = Trajectory::constant(data.v0, 0.0, cfg.dt, N + 1);
  Trajectory pt = Trajectory::constant(q0, 0.0, cfg.dt, N + 1);
  const auto J = chi_hat.jacobian_range();

  ElasticProblem ep;
  ep.mesh = mesh;
  ep.mat = mat;
  ep.u0 = data.u0;
  ep.u1 = data.u1;
  ep.window = window;

  StokesProblem sp;
  sp.mesh = mesh;
  sp.mat = mat;
  sp.v0 = data.v0;
  sp.window = window;
  sp.p0 = q0;
  sp.backward_euler_first_step = cfg.backward_euler_first_step;

  InnerResult res;
  auto& rep = res.report;
  rep.accepted_T = cfg.T;
  rep.J_range = J;
  int strikes = 0;
  bool converged = false;
  for (int k = 1; k <= cfg.max_inner; ++k) {
    ep.gamma_L_velocity = trace_extract(vt, BoundaryTag::GammaL);
    SolidTrajectory solid = solvers.elastic().solve(ep);
    sp.loads = coupling_loads(solid, vt, pt, chi_hat, mat, cfg.interface_load);
    FluidTrajectory fluid = solvers.stokes().solve(sp);

    double inc = velocity_pressure_norm(difference(fluid.v, vt), difference(fluid.p, pt));
    double rel = relative(inc, velocity_pressure_norm(fluid.v, fluid.p));
    if (!std::isfinite(rel)) throw NonContraction("inner iteration produced a non-finite increment");
    rep.inner_increments.push_back(rel);

    IterationRecord r;
    r.outer_k = outer_k;
    r.inner_k = k;
    r.inner_increment = rel;
    r.Jmin = J.first;
    r.Jmax = J.second;
    if (k >= 2) {
      double prev = rep.inner_increments[k - 2];
      r.ratio = prev > 0 ? rel / prev : 0.0;
      r.has_ratio = true;
      rep.contraction_ratios.push_back(r.ratio);
      strikes = r.ratio >= 1.0 ? strikes + 1 : 0;
    }
    if (cfg.track_energy) r.energy_residual = energy_report(solid, fluid, mat, &chi_hat).integrated_residual;
    rep.records.push_back(r);

    vt = std::move(fluid.v);
    pt = std::move(fluid.p);
    res.fluid = std::move(fluid);
    res.fluid.v = vt;
    res.fluid.p = pt;
    if (rel <= cfg.tol_inner) {
      converged = true;
      break;
    }
    if (strikes >= cfg.strikes)
      throw NonContraction("inner iteration is not contracting; last ratios " + tail(rep.contraction_ratios));
  }
  if (!converged)
    throw NonContraction("inner iteration did not reach tolerance within " + std::to_string(cfg.max_inner) +
                         " iterations; last ratios " + tail(rep.contraction_ratios));

  ep.gamma_L_velocity = trace_extract(vt, BoundaryTag::GammaL);
  res.solid = solvers.elastic().solve(ep);
  return res;
}

DeformationTrajectory flow_map_update(const Trajectory& v) {
  if (v.empty()) throw ShapeError("flow map needs a velocity trajectory");
  DeformationTrajectory out;
  out.t0 = v.t0;
  out.dt = v.dt;
  out.velocity = v;
  FieldSnapshot chi = identity_map(v[0].space, v.t0);
  out.levels.push_back(deformation_from_map(chi));
  for (int n = 1; n < v.num_levels(); ++n) {
    chi.values += 0.5 * v.dt * (v[n - 1].values + v[n].values);
    chi.time = v.t0 + n * v.dt;
    out.levels.push_back(deformation_from_map(chi));
  }
  return out;
}

DeformationTrajectory seed_deformation(const FieldSnapshot& v0, const TimeWindow& window) {
  const int N = window.steps();
  DeformationTrajectory out;
  out.t0 = window.t0;
  out.dt = window.dt;
  out.velocity = Trajectory::constant(v0, window.t0, window.dt, N + 1);
  FieldSnapshot X = identity_map(v0.space, window.t0);
  for (int n = 0; n <= N; ++n) {
    FieldSnapshot chi = X;
    chi.values += (n * window.dt) * v0.values;
    chi.time = window.time(n);
    out.levels.push_back(deformation_from_map(chi));
  }
  return out;
}

namespace {

double max_interface_mismatch(const SolidTrajectory& s, const FluidTrajectory& f) {
  if (s.u_t.empty() || f.v.empty()) return 0.0;
  Trajectory ts = trace_extract(s.u_t, BoundaryTag::GammaL);
  Trajectory tf = trace_extract(f.v, BoundaryTag::GammaL);
  double m = 0.0;
  for (int n = 0; n < ts.num_levels(); ++n) {
    FieldSnapshot d = tf[n];
    d.values -= ts[n].values;
    m = std::max(m, discrete_norm(d, NormKind::L2));
  }
  return m;
}

}  // namespace

Solution outer_fixed_point(const InitialData& data, const MeshPtr& mesh, const MaterialParams& mat,
                           const FixedPointConfig& cfg) {
  cfg.validate();
  if (!has_tag(*mesh, BoundaryTag::GammaL)) throw ConfigError("coupled runs need a fluid-solid interface");
  DerivedData derived = construct_derived(data, mesh, mat);
  CompatReport compat = check_compatibility(data, derived, mesh, mat, cfg.compat_tol);
  if (!compat.all_pass()) {
    std::string names;
    for (const auto& c : compat.failed_conditions()) names += (names.empty() ? "" : " ") + c;
    throw CompatibilityError("initial data violate compatibility conditions " + names);
  }
  CoupledSolvers solvers(mesh, mat, cfg.dt);

  FixedPointConfig c = cfg;
  int shrinks = 0;
  for (;;) {
    try {
      TimeWindow window{0.0, c.T, c.dt};
      DeformationTrajectory chi = seed_deformation(data.v0, window);
      IterationReport log;
      for (int k = 1; k <= c.max_outer; ++k) {
        InnerResult inner = inner_fixed_point(solvers, chi, data, &derived, c, k);
        log.records.insert(log.records.end(), inner.report.records.begin(), inner.report.records.end());
        DeformationTrajectory next = flow_map_update(inner.fluid.v);
        Trajectory cn = next.chi_trajectory();
        double inc = flow_map_norm(difference(cn, chi.chi_trajectory()));
        double rel = relative(inc, flow_map_norm(cn));
        log.outer_increments.push_back(rel);
        if (k >= 2) {
          double prev = log.outer_increments[k - 2];
          log.outer_ratios.push_back(prev > 0 ? rel / prev : 0.0);
        }
        chi = std::move(next);
        if (rel <= c.tol_outer) {
          Solution sol;
          log.inner_increments = inner.report.inner_increments;
          log.contraction_ratios = inner.report.contraction_ratios;
          log.J_range = chi.jacobian_range();
          log.accepted_T = c.T;
          log.window_shrinks = shrinks;
          sol.solid = std::move(inner.solid);
          sol.fluid = std::move(inner.fluid);
          sol.chi = std::move(chi);
          sol.report = std::move(log);
          sol.energy = energy_report(sol.solid, sol.fluid, mat, &sol.chi);
          sol.interface_mismatch = max_interface_mismatch(sol.solid, sol.fluid);
          for (const auto& l : sol.chi.levels) sol.piola_residual = std::max(sol.piola_residual, piola_condition_residual(l.cof));
          return sol;
        }
        int run = 0;
        for (auto it = log.outer_ratios.rbegin(); it != log.outer_ratios.rend() && *it >= 1.0; ++it) ++run;
        if (run >= c.strikes) throw NonContraction("flow-map iteration is not contracting; last ratios " + tail(log.outer_ratios));
      }
      throw NonContraction("flow-map iteration did not reach tolerance within " + std::to_string(c.max_outer) +
                           " iterations; last ratios " + tail(log.outer_ratios));
    } catch (const NonContraction& e) {
      int steps = static_cast<int>(std::floor(c.shrink_factor * c.T / c.dt + 1e-9));
      if (steps < 1)
        throw WindowCollapse("time window shrunk below one step (T = " + std::to_string(c.T) + "): " + e.what());
      c.T = steps * c.dt;
      ++shrinks;
    }
  }
}

double contraction_estimate(const std::vector<double>& inc) {
  if (inc.size() < 2) throw ConfigError("contraction estimate needs at least two increments");
  double logsum = 0.0;
  for (std::size_t i = 1; i < inc.size(); ++i) {
    if (inc[i - 1] <= 0) return 0.0;
    if (inc[i] <= 0) return 0.0;
    logsum += std::log(inc[i] / inc[i - 1]);
  }
  return std::exp(logsum / static_cast<double>(inc.size() - 1));
}

}  // namespace fsi
