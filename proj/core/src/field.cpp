#include "fsi/field.hpp"

#include <cmath>

#include "fsi/errors.hpp"

namespace fsi {

FieldSnapshot::FieldSnapshot(SpacePtr s, int ncomp, double t)
    : space(std::move(s)), components(ncomp), values(Eigen::VectorXd::Zero(space->num_dofs() * ncomp)), time(t) {}

FieldSnapshot::FieldSnapshot(SpacePtr s, int ncomp, Eigen::VectorXd v, double t)
    : space(std::move(s)), components(ncomp), values(std::move(v)), time(t) {
  if (values.size() != space->num_dofs() * ncomp) throw ShapeError("field value array has wrong length");
}

SmallVec FieldSnapshot::vector_at(int dof) const {
  return values.segment(dof * components, components);
}

Tensor2 FieldSnapshot::tensor_at(int dof) const {
  const int d = space->dim();
  if (components != d * d) throw ShapeError("field is not tensor valued");
  Tensor2 t(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t(i, j) = values(dof * components + i * d + j);
  return t;
}

void FieldSnapshot::set_vector(int dof, const SmallVec& v) {
  if (v.size() != components) throw ShapeError("vector length does not match field components");
  values.segment(dof * components, components) = v;
}

void FieldSnapshot::set_tensor(int dof, const Tensor2& t) {
  const int d = space->dim();
  if (components != d * d || t.rows() != d || t.cols() != d) throw ShapeError("tensor shape mismatch");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) values(dof * components + i * d + j) = t(i, j);
}

Eigen::VectorXd FieldSnapshot::component(int c) const {
  Eigen::VectorXd out(num_dofs());
  for (int i = 0; i < num_dofs(); ++i) out(i) = values(i * components + c);
  return out;
}

bool FieldSnapshot::compatible(const FieldSnapshot& o) const {
  return space && o.space && space->same_layout(*o.space) && components == o.components;
}

void FieldSnapshot::check_compatible(const FieldSnapshot& o, const char* what) const {
  if (!compatible(o)) throw ShapeError(std::string("incompatible fields: ") + what);
}

FieldSnapshot interpolate_scalar(const SpacePtr& s, const ScalarFn& f, double t) {
  FieldSnapshot out(s, 1, t);
  for (int i = 0; i < s->num_dofs(); ++i) out.values(i) = f(s->dof_coord(i), t);
  return out;
}

FieldSnapshot interpolate_vector(const SpacePtr& s, const VectorFn& f, double t) {
  const int d = s->dim();
  FieldSnapshot out(s, d, t);
  for (int i = 0; i < s->num_dofs(); ++i) {
    SmallVec v = f(s->dof_coord(i), t);
    if (v.size() != d) throw ShapeError("vector function returned wrong length");
    out.set_vector(i, v);
  }
  return out;
}

FieldSnapshot restrict_to(const FieldSnapshot& src, const SpacePtr& dst, bool allow_missing) {
  if (&src.space->mesh() != &dst->mesh()) throw ShapeError("restriction across meshes");
  if (src.space->degree() != dst->degree()) throw ShapeError("restriction between different degrees");
  FieldSnapshot out(dst, src.components, src.time);
  for (int i = 0; i < dst->num_dofs(); ++i) {
    int sd = src.space->dof_of_node(dst->node(i));
    if (sd < 0) {
      if (allow_missing) continue;
      throw ShapeError("destination node not present in source space");
    }
    out.values.segment(i * src.components, src.components) = src.values.segment(sd * src.components, src.components);
  }
  return out;
}

FieldSnapshot p1_to_p2(const FieldSnapshot& p1, const SpacePtr& p2s) {
  if (p1.space->degree() != 1 || p2s->degree() != 2) throw ShapeError("p1_to_p2 expects P1 source and P2 target");
  const auto& mesh = p2s->mesh();
  FieldSnapshot out(p2s, p1.components, p1.time);
  const int nc = p1.components;
  for (int i = 0; i < p2s->num_dofs(); ++i) {
    int node = p2s->node(i);
    if (node < mesh.num_vertices()) {
      int sd = p1.space->dof_of_node(node);
      if (sd < 0) throw ShapeError("P2 vertex missing from P1 space");
      out.values.segment(i * nc, nc) = p1.values.segment(sd * nc, nc);
    } else {
      const auto& e = mesh.edge(node - mesh.num_vertices());
      int a = p1.space->dof_of_node(e[0]), b = p1.space->dof_of_node(e[1]);
      if (a < 0 || b < 0) throw ShapeError("P2 edge endpoints missing from P1 space");
      out.values.segment(i * nc, nc) = 0.5 * (p1.values.segment(a * nc, nc) + p1.values.segment(b * nc, nc));
    }
  }
  return out;
}

void Trajectory::validate() const {
  if (levels.empty()) return;
  if (levels.size() > 1 && !(dt > 0)) throw ShapeError("trajectory time step must be positive");
  for (std::size_t n = 0; n < levels.size(); ++n) {
    if (!levels[n].compatible(levels[0])) throw ShapeError("trajectory levels live on different spaces");
    double tn = t0 + dt * static_cast<double>(n);
    if (std::abs(levels[n].time - tn) > 1e-9 * (1.0 + std::abs(tn))) throw ShapeError("trajectory times are not uniform");
  }
}

Trajectory Trajectory::constant(const FieldSnapshot& f, double t0, double dt, int nlevels) {
  Trajectory tr;
  tr.t0 = t0;
  tr.dt = dt;
  for (int n = 0; n < nlevels; ++n) {
    FieldSnapshot s = f;
    s.time = t0 + n * dt;
    tr.levels.push_back(std::move(s));
  }
  return tr;
}

Trajectory Trajectory::zeros(const SpacePtr& s, int ncomp, double t0, double dt, int nlevels) {
  return constant(FieldSnapshot(s, ncomp, t0), t0, dt, nlevels);
}

Trajectory time_derivative(const Trajectory& tr) {
  Trajectory out;
  out.t0 = tr.t0;
  out.dt = tr.dt;
  const int n = tr.num_levels();
  if (n < 2) {
    for (const auto& l : tr.levels) {
      FieldSnapshot z = l;
      z.values.setZero();
      out.levels.push_back(z);
    }
    return out;
  }
  const double h = tr.dt;
  for (int k = 0; k < n; ++k) {
    FieldSnapshot s = tr[k];
    if (n == 2) {
      s.values = (tr[1].values - tr[0].values) / h;
    } else if (k == 0) {
      s.values = (-3.0 * tr[0].values + 4.0 * tr[1].values - tr[2].values) / (2.0 * h);
    } else if (k == n - 1) {
      s.values = (3.0 * tr[k].values - 4.0 * tr[k - 1].values + tr[k - 2].values) / (2.0 * h);
    } else {
      s.values = (tr[k + 1].values - tr[k - 1].values) / (2.0 * h);
    }
    out.levels.push_back(std::move(s));
  }
  return out;
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  if (a.num_levels() != b.num_levels()) throw ShapeError("trajectories have different lengths");
  Trajectory out = a;
  for (int n = 0; n < a.num_levels(); ++n) {
    a[n].check_compatible(b[n], "trajectory difference");
    out[n].values -= b[n].values;
  }
  return out;
}

int TimeWindow::steps() const {
  if (!(dt > 0) || !(T > 0)) throw ConfigError("time window needs T > 0 and dt > 0");
  double r = T / dt;
  int n = static_cast<int>(std::lround(r));
  if (n < 1 || std::abs(r - n) > 1e-6 * r) throw ConfigError("T must be an integer multiple of dt");
  return n;
}

}  // namespace fsi
