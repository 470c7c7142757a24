#include "fsi/mms.hpp"

#include <cmath>
#include <cstdio>

#include "fsi/elastic.hpp"
#include "fsi/errors.hpp"
#include "fsi/inequalities.hpp"
#include "fsi/operators.hpp"
#include "fsi/stokes.hpp"

namespace fsi {

namespace {

using std::cos;
using std::pow;
using std::sin;
using std::sqrt;

#include "mms_sources.inc"

using Fn = double (*)(double, double, double, const MaterialParams&);

VectorFn vec(Fn a, Fn b, const MaterialParams& m) {
  return [a, b, m](const SmallVec& X, double t) {
    SmallVec v(2);
    v << a(X(0), X(1), t, m), b(X(0), X(1), t, m);
    return v;
  };
}

ScalarFn scal(Fn a, const MaterialParams& m) {
  return [a, m](const SmallVec& X, double t) { return a(X(0), X(1), t, m); };
}

Trajectory sample(const SpacePtr& s, const VectorFn& f, const TimeWindow& w) {
  Trajectory tr;
  tr.t0 = w.t0;
  tr.dt = w.dt;
  for (int n = 0; n <= w.steps(); ++n) tr.levels.push_back(interpolate_vector(s, f, w.time(n)));
  return tr;
}

MeshPtr annulus(double h) {
  GeometrySpec g;
  g.h = h;
  return build_reference_mesh(g);
}

void fit(MmsStudy& st) {
  std::vector<double> h, e, p;
  for (const auto& r : st.rows) {
    h.push_back(r.h);
    e.push_back(r.error);
    p.push_back(r.secondary_error);
  }
  if (h.size() >= 2) {
    st.order = loglog_slope(h, e);
    if (st.solver == "stokes") st.secondary_order = loglog_slope(h, p);
  }
}

}  // namespace

MmsStudy mms_elastic(const std::vector<double>& hs, const MaterialParams& mat, double T, double dt_over_h) {
  MmsStudy st;
  st.solver = "elastic";
  for (double h : hs) {
    MeshPtr m = annulus(h);
    TimeWindow w{0.0, T, dt_over_h * h};
    w.steps();
    ElasticProblem pb;
    pb.mesh = m;
    pb.mat = mat;
    pb.window = w;
    SpacePtr S = solid_space(m);
    SpacePtr bs = boundary_space(m, BoundaryTag::GammaL, 2);
    pb.u0 = interpolate_vector(S, vec(solid_u0, solid_u1, mat), 0.0);
    pb.u1 = interpolate_vector(S, vec(solid_ut0, solid_ut1, mat), 0.0);
    pb.gamma_L_velocity = sample(bs, vec(solid_ut0, solid_ut1, mat), w);
    pb.body_force = sample(S, vec(solid_f0, solid_f1, mat), w);
    SolidTrajectory sol = solve_elastic(pb);
    FieldSnapshot err = sol.u.levels.back();
    err.values -= interpolate_vector(S, vec(solid_u0, solid_u1, mat), w.t0 + T).values;
    st.rows.push_back({h, w.dt, discrete_norm(err, NormKind::L2), 0.0});
  }
  fit(st);
  return st;
}

MmsStudy mms_stokes(const std::vector<double>& hs, const MaterialParams& mat, double T, double dt_over_h) {
  MmsStudy st;
  st.solver = "stokes";
  for (double h : hs) {
    MeshPtr m = annulus(h);
    TimeWindow w{0.0, T, dt_over_h * h};
    w.steps();
    SpacePtr V = fluid_velocity_space(m), P = fluid_pressure_space(m);
    SpacePtr bs = boundary_space(m, BoundaryTag::GammaL, 2);
    StokesProblem pb;
    pb.mesh = m;
    pb.mat = mat;
    pb.window = w;
    pb.v0 = interpolate_vector(V, vec(fluid_v0, fluid_v1, mat), 0.0);
    pb.f = sample(V, vec(fluid_f0, fluid_f1, mat), w);
    pb.d = sample(bs, vec(fluid_d0, fluid_d1, mat), w);
    pb.g.t0 = w.t0;
    pb.g.dt = w.dt;
    for (int n = 0; n <= w.steps(); ++n) pb.g.levels.push_back(interpolate_scalar(V, scal(fluid_g, mat), w.time(n)));
    pb.p0 = interpolate_scalar(P, scal(fluid_p, mat), 0.0);
    StokesSolver solver(m, mat, w.dt);
    // The interpolated v0 meets div v0 = g(0) only up to interpolation error;
    // the initial constraint row is taken from v0 itself.
    WeakLoads loads = solver.loads_from_fields(pb);
    loads.constraint[0] = solver.divergence() * pb.v0.values;
    pb.loads = loads;
    FluidTrajectory sol = solver.solve(pb);
    FieldSnapshot ev = sol.v.levels.back();
    ev.values -= interpolate_vector(V, vec(fluid_v0, fluid_v1, mat), w.t0 + T).values;
    FieldSnapshot ep = sol.p.levels.back();
    ep.values -= interpolate_scalar(P, scal(fluid_p, mat), w.t0 + T).values;
    st.rows.push_back({h, w.dt, discrete_norm(ev, NormKind::L2), discrete_norm(ep, NormKind::L2)});
  }
  fit(st);
  return st;
}

std::string convergence_csv(const std::vector<MmsStudy>& studies) {
  std::string out = "solver,h,dt,error,secondary_error,order,secondary_order\n";
  char buf[256];
  for (const auto& s : studies)
    for (const auto& r : s.rows) {
      std::snprintf(buf, sizeof buf, "%s,%.6g,%.6g,%.10e,%.10e,%.6f,%.6f\n", s.solver.c_str(), r.h, r.dt, r.error,
                    r.secondary_error, s.order, s.secondary_order);
      out += buf;
    }
  return out;
}

}  // namespace fsi
