#include "fsi/coupling.hpp"

#include "fsi/errors.hpp"
#include "fsi/operators.hpp"

namespace fsi {

namespace {

void check_grid(const Trajectory& v, const DeformationTrajectory& def) {
  if (v.num_levels() != def.num_levels()) throw ShapeError("velocity and deformation grids differ");
  if (v.empty()) return;
  if (!v[0].space->same_layout(*def[0].chi.space)) throw ShapeError("velocity and deformation spaces differ");
  if (std::abs(v.dt - def.dt) > 1e-12 * (1.0 + def.dt) || std::abs(v.t0 - def.t0) > 1e-12)
    throw ShapeError("velocity and deformation time grids differ");
}

Trajectory like(const Trajectory& v) {
  Trajectory out;
  out.t0 = v.t0;
  out.dt = v.dt;
  return out;
}

// T - T_chi at a point, written through (I - C) so it vanishes exactly at C = I.
Tensor2 stress_difference(const Tensor2& gv, double p, const Tensor2& C, double mu) {
  const int d = static_cast<int>(gv.rows());
  return Tensor2(-p * (identity(d) - C) + mu * stress_mismatch(gv, C));
}

}  // namespace

Trajectory forcing_g(const Trajectory& v, const DeformationTrajectory& def) {
  check_grid(v, def);
  Trajectory out = like(v);
  for (int n = 0; n < v.num_levels(); ++n) {
    const int d = v[n].space->dim();
    FieldSnapshot gv = NodalGradient::of(v[n].space)->vector_gradient(v[n]);
    FieldSnapshot g(v[n].space, 1, v[n].time);
    for (int i = 0; i < g.num_dofs(); ++i) g.values(i) = ddot(Tensor2(identity(d) - def[n].cof.tensor_at(i)), gv.tensor_at(i));
    out.levels.push_back(std::move(g));
  }
  return out;
}

Trajectory stress_mismatch_S(const Trajectory& v, const DeformationTrajectory& def) {
  check_grid(v, def);
  Trajectory out = like(v);
  for (int n = 0; n < v.num_levels(); ++n) {
    const int d = v[n].space->dim();
    FieldSnapshot gv = NodalGradient::of(v[n].space)->vector_gradient(v[n]);
    FieldSnapshot S(v[n].space, d * d, v[n].time);
    for (int i = 0; i < S.num_dofs(); ++i) S.set_tensor(i, stress_mismatch(gv.tensor_at(i), def[n].cof.tensor_at(i)));
    out.levels.push_back(std::move(S));
  }
  return out;
}

Trajectory forcing_f(const Trajectory& v, const Trajectory& p, const DeformationTrajectory& def,
                     const MaterialParams& mat) {
  check_grid(v, def);
  if (p.num_levels() != v.num_levels()) throw ShapeError("pressure grid differs from velocity grid");
  Trajectory out = like(v);
  for (int n = 0; n < v.num_levels(); ++n) {
    const int d = v[n].space->dim();
    auto G = NodalGradient::of(v[n].space);
    FieldSnapshot gv = G->vector_gradient(v[n]);
    FieldSnapshot p2 = p[n].space->degree() == 1 ? p1_to_p2(p[n], v[n].space) : p[n];
    FieldSnapshot M(v[n].space, d * d, v[n].time);
    for (int i = 0; i < M.num_dofs(); ++i)
      M.set_tensor(i, Tensor2(-stress_difference(gv.tensor_at(i), p2.values(i), def[n].cof.tensor_at(i), mat.mu)));
    out.levels.push_back(G->tensor_divergence(M));
  }
  return out;
}

Trajectory forcing_d(const SolidTrajectory& u, const Trajectory& v, const Trajectory& p,
                     const DeformationTrajectory& def, const MaterialParams& mat) {
  check_grid(v, def);
  if (p.num_levels() != v.num_levels() || u.u.num_levels() != v.num_levels())
    throw ShapeError("solid, pressure and velocity grids differ");
  Trajectory out = like(v);
  Trajectory traction = u.traction_gamma_L.empty() ? interface_traction(u.u, mat) : u.traction_gamma_L;
  for (int n = 0; n < v.num_levels(); ++n) {
    const auto& vs = v[n].space;
    const int d = vs->dim();
    FieldSnapshot gv = NodalGradient::of(vs)->vector_gradient(v[n]);
    FieldSnapshot p2 = p[n].space->degree() == 1 ? p1_to_p2(p[n], vs) : p[n];
    const SpacePtr& bs = traction[n].space;
    FieldSnapshot normals = nodal_normals(bs);
    FieldSnapshot dn = traction[n];
    for (int b = 0; b < bs->num_dofs(); ++b) {
      int i = vs->dof_of_node(bs->node(b));
      if (i < 0) throw ShapeError("gamma_L node missing from fluid space");
      Tensor2 D = stress_difference(gv.tensor_at(i), p2.values(i), def[n].cof.tensor_at(i), mat.mu);
      dn.values.segment(b * d, d) += D * normals.vector_at(b);
    }
    out.levels.push_back(std::move(dn));
  }
  return out;
}

WeakLoads coupling_loads(const SolidTrajectory& su, const Trajectory& v, const Trajectory& p,
                         const DeformationTrajectory& def, const MaterialParams& mat, InterfaceLoad mode) {
  check_grid(v, def);
  const Trajectory& u = su.u;
  if (p.num_levels() != v.num_levels() || u.num_levels() != v.num_levels())
    throw ShapeError("solid, pressure and velocity grids differ");
  WeakLoads w;
  if (v.empty()) return w;
  const auto& vs = *v[0].space;
  const auto& ps = *p[0].space;
  const auto& mesh = vs.mesh();
  const int d = vs.dim();
  const auto& rule = simplex_rule(d, default_quadrature_points());
  const auto& frule = simplex_rule(d - 1, default_quadrature_points());
  LocalEval ev, ep;
  for (int n = 0; n < v.num_levels(); ++n) {
    Eigen::VectorXd mom = Eigen::VectorXd::Zero(vs.num_dofs() * d);
    Eigen::VectorXd con = Eigen::VectorXd::Zero(ps.num_dofs());
    const FieldSnapshot& cof = def[n].cof;
    for (int e = 0; e < vs.num_elements(); ++e) {
      CellGeometry g = cell_geometry(mesh, space_cell(vs, e));
      const auto& vd = vs.element_dofs(e);
      const auto& pd = ps.element_dofs(e);
      for (int q = 0; q < rule.size(); ++q) {
        const auto& lam = rule.barycentric[q];
        eval_local(d, vs.degree(), lam, g.grad_lambda, ev);
        shape::values(d, ps.degree(), lam, ep.phi);
        Tensor2 gv = field_gradient(v[n], e, ev);
        double pq = field_value(p[n], e, ep)(0);
        Eigen::VectorXd cv = field_value(cof, e, ev);
        Tensor2 C(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) C(i, j) = cv(i * d + j);
        Tensor2 Dst = stress_difference(gv, pq, C, mat.mu);  // = T - T_chi
        double wq = rule.weights[q] * g.volume;
        for (std::size_t a = 0; a < vd.size(); ++a) {
          SmallVec contrib = Dst * ev.dphi.row(a).transpose();
          mom.segment(vd[a] * d, d) += wq * contrib;
        }
        double gq = ddot(Tensor2(identity(d) - C), gv);
        for (std::size_t i = 0; i < pd.size(); ++i) con(pd[i]) += wq * ep.phi(i) * gq;
      }
    }
    if (mode == InterfaceLoad::Reaction) {
      if (static_cast<int>(su.interface_reaction.size()) != v.num_levels())
        throw ShapeError("solid trajectory carries no interface reaction");
      SpacePtr bs = boundary_space(vs.mesh_ptr(), BoundaryTag::GammaL, 2);
      const Eigen::VectorXd& R = su.interface_reaction[n];
      for (int b = 0; b < bs->num_dofs(); ++b) {
        int i = vs.dof_of_node(bs->node(b));
        mom.segment(i * d, d) -= R.segment(b * d, d);
      }
      w.momentum.push_back(std::move(mom));
      w.constraint.push_back(std::move(con));
      continue;
    }
    // interface traction from the solid side
    for (const auto& f : mesh.facets()) {
      if (f.tag != BoundaryTag::GammaL) continue;
      int fe = vs.element_of(f.fluid_cell);
      const auto& vd = vs.element_dofs(fe);
      for (int q = 0; q < frule.size(); ++q) {
        Eigen::Vector4d ls = facet_point_in_cell(mesh, f, f.solid_cell, frule.barycentric[q]);
        Eigen::Vector4d lf = facet_point_in_cell(mesh, f, f.fluid_cell, frule.barycentric[q]);
        Tensor2 gu = gradient_in_cell(u[n], f.solid_cell, ls);
        SmallVec t = piola_stress(gu, mat) * f.normal;
        shape::values(d, vs.degree(), lf, ev.phi);
        double wq = frule.weights[q] * f.measure;
        for (std::size_t a = 0; a < vd.size(); ++a) mom.segment(vd[a] * d, d) += wq * ev.phi(a) * t;
      }
    }
    w.momentum.push_back(std::move(mom));
    w.constraint.push_back(std::move(con));
  }
  return w;
}

ForcingBundle assemble_forcing(const SolidTrajectory& u, const Trajectory& v, const Trajectory& p,
                               const DeformationTrajectory& def, const MaterialParams& mat, int iteration,
                               bool with_diagnostics, InterfaceLoad mode) {
  ForcingBundle b;
  b.source_iteration = iteration;
  b.loads = coupling_loads(u, v, p, def, mat, mode);
  if (with_diagnostics) {
    b.g = forcing_g(v, def);
    b.f = forcing_f(v, p, def, mat);
    b.d = forcing_d(u, v, p, def, mat);
  }
  return b;
}

}  // namespace fsi
