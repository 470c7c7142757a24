#include "fsi/stokes.hpp"

#include <cmath>

#include "fsi/elastic.hpp"
#include "fsi/errors.hpp"
#include "fsi/operators.hpp"

namespace fsi {

namespace {

SpMat build_kkt(const SpMat& Avv, const SpMat& B) {
  const int nv = static_cast<int>(Avv.rows()), np = static_cast<int>(B.rows());
  Triplets t;
  t.reserve(Avv.nonZeros() + 2 * B.nonZeros());
  for (int k = 0; k < Avv.outerSize(); ++k)
    for (SpMat::InnerIterator it(Avv, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B.outerSize(); ++k)
    for (SpMat::InnerIterator it(B, k); it; ++it) {
      t.emplace_back(it.col(), nv + it.row(), -it.value());
      t.emplace_back(nv + it.row(), it.col(), -it.value());
    }
  SpMat K(nv + np, nv + np);
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

std::unique_ptr<Eigen::SparseLU<SpMat>> factor(const SpMat& K) {
  auto lu = std::make_unique<Eigen::SparseLU<SpMat>>();
  lu->analyzePattern(K);
  lu->factorize(K);
  if (lu->info() != Eigen::Success) throw SingularMatrixError("Stokes saddle-point matrix is singular");
  return lu;
}

}  // namespace

StokesSolver::StokesSolver(MeshPtr mesh, const MaterialParams& mat, double dt)
    : mesh_(std::move(mesh)), mat_(mat), dt_(dt) {
  mat_.validate();
  if (!(dt_ > 0)) throw ConfigError("time step must be positive");
  vspace_ = fluid_velocity_space(mesh_);
  pspace_ = fluid_pressure_space(mesh_);
  bspace_ = boundary_space(mesh_, BoundaryTag::GammaL, 2);
  const int d = mesh_->dim();
  M0_ = expand_components(mass_matrix(*vspace_), d);
  A_ = viscous_matrix(*vspace_, mat_.mu);
  B_ = divergence_matrix(*pspace_, *vspace_);
  Q1_ = mixed_mass(*pspace_, *pspace_);
  Q2_ = mixed_mass(*pspace_, *vspace_);
  {
    SpMat Mb = mass_matrix(*bspace_);
    Triplets t;
    for (int k = 0; k < Mb.outerSize(); ++k)
      for (SpMat::InnerIterator it(Mb, k); it; ++it) {
        int fr = vspace_->dof_of_node(bspace_->node(it.row()));
        if (fr < 0) throw MeshError("gamma_L node missing from fluid space");
        for (int c = 0; c < d; ++c) t.emplace_back(vidx(fr, c, d), vidx(it.col(), c, d), it.value());
      }
    L_.resize(vspace_->num_dofs() * d, bspace_->num_dofs() * d);
    L_.setFromTriplets(t.begin(), t.end());
  }
  const double r = mat_.rho_L / dt_;
  SpMat cn_lhs = r * M0_ + 0.5 * A_;
  cn_rhs_ = r * M0_ - 0.5 * A_;
  cn_ = factor(build_kkt(cn_lhs, B_));
  SpMat be_lhs = r * M0_ + A_;
  be_ = factor(build_kkt(be_lhs, B_));
}

WeakLoads StokesSolver::loads_from_fields(const StokesProblem& pb) const {
  const int N = pb.window.steps();
  const int d = mesh_->dim();
  WeakLoads w;
  w.momentum.assign(N + 1, Eigen::VectorXd::Zero(vspace_->num_dofs() * d));
  w.constraint.assign(N + 1, Eigen::VectorXd::Zero(pspace_->num_dofs()));
  auto check = [&](const Trajectory& tr, const char* name) {
    if (!tr.empty() && tr.num_levels() != N + 1)
      throw ShapeError(std::string(name) + " must have one level per time step");
  };
  check(pb.g, "g");
  check(pb.f, "f");
  check(pb.d, "d");
  for (int n = 0; n <= N; ++n) {
    if (!pb.f.empty()) {
      if (!pb.f[n].space->same_layout(*vspace_) || pb.f[n].components != d) throw ShapeError("f must be a fluid P2 vector field");
      w.momentum[n] += M0_ * pb.f[n].values;
    }
    if (!pb.d.empty()) {
      if (!pb.d[n].space->same_layout(*bspace_) || pb.d[n].components != d) throw ShapeError("d must be a P2 vector field on gamma_L");
      w.momentum[n] += L_ * pb.d[n].values;
    }
    if (!pb.g.empty()) {
      const auto& gs = *pb.g[n].space;
      if (gs.is_boundary() || gs.region() != FieldRegion::Fluid || pb.g[n].components != 1)
        throw ShapeError("g must be a scalar fluid field");
      w.constraint[n] = constraint_load(gs.degree()) * pb.g[n].values;
    }
  }
  return w;
}

FluidTrajectory StokesSolver::solve(const StokesProblem& pb) const {
  const int N = pb.window.steps();
  const int d = mesh_->dim();
  if (std::abs(pb.window.dt - dt_) > 1e-12 * dt_) throw ConfigError("problem time step differs from solver time step");
  if (!pb.v0.space || !pb.v0.space->same_layout(*vspace_) || pb.v0.components != d)
    throw ShapeError("v0 must be a fluid P2 vector field");
  WeakLoads w = pb.loads ? *pb.loads : loads_from_fields(pb);
  if (static_cast<int>(w.momentum.size()) != N + 1 || static_cast<int>(w.constraint.size()) != N + 1)
    throw ShapeError("weak loads must have one entry per time level");
  const int nv = vspace_->num_dofs() * d, np = pspace_->num_dofs();

  Eigen::VectorXd v = pb.v0.values;
  {
    double r = (B_ * v - w.constraint[0]).norm();
    double scale = std::max({1.0, w.constraint[0].norm(), (B_.cwiseAbs() * v.cwiseAbs()).norm()});
    if (r > pb.compat_tol * scale) throw CompatibilityError("initial velocity violates the divergence constraint at t0");
  }

  FluidTrajectory out;
  out.v.t0 = out.p.t0 = pb.window.t0;
  out.v.dt = out.p.dt = dt_;
  out.v.levels.emplace_back(vspace_, d, v, pb.window.t0);
  out.divergence_residual.push_back((B_ * v - w.constraint[0]).norm());

  std::vector<Eigen::VectorXd> pmid;  // pressure attached to step m (midpoint for CN)
  const double r = mat_.rho_L / dt_;
  for (int m = 0; m < N; ++m) {
    Eigen::VectorXd rhs(nv + np);
    bool be = m == 0 && pb.backward_euler_first_step;
    if (be) {
      rhs.head(nv) = r * (M0_ * v) + w.momentum[m + 1];
    } else {
      rhs.head(nv) = cn_rhs_ * v + 0.5 * (w.momentum[m] + w.momentum[m + 1]);
    }
    rhs.tail(np) = -w.constraint[m + 1];
    Eigen::VectorXd x = be ? be_->solve(rhs) : cn_->solve(rhs);
    if (!x.allFinite()) throw SolverError("Stokes step produced non-finite values");
    v = x.head(nv);
    pmid.push_back(x.tail(np));
    double t = pb.window.time(m + 1);
    out.v.levels.emplace_back(vspace_, d, v, t);
    out.divergence_residual.push_back((B_ * v - w.constraint[m + 1]).norm());
  }
  // Level pressures from the step pressures.
  std::vector<Eigen::VectorXd> pl(N + 1);
  if (pb.p0) {
    if (!pb.p0->space->same_layout(*pspace_)) throw ShapeError("p0 must be a fluid P1 field");
    pl[0] = pb.p0->values;
  } else {
    pl[0] = N >= 2 ? Eigen::VectorXd(1.5 * pmid[0] - 0.5 * pmid[1]) : pmid[0];
  }
  for (int n = 1; n < N; ++n) pl[n] = 0.5 * (pmid[n - 1] + pmid[n]);
  pl[N] = N >= 2 ? Eigen::VectorXd(1.5 * pmid[N - 1] - 0.5 * pmid[N - 2]) : pmid[N - 1];
  if (pb.backward_euler_first_step && N >= 1) {
    if (N >= 2) pl[1] = pmid[0];
  }
  for (int n = 0; n <= N; ++n) out.p.levels.emplace_back(pspace_, 1, pl[n], pb.window.time(n));
  out.v_t = time_derivative(out.v);
  out.stress_gamma_L = fluid_boundary_stress(out.v, out.p, mat_);
  return out;
}

FluidTrajectory solve_stokes(const StokesProblem& pb) {
  StokesSolver s(pb.mesh, pb.mat, pb.window.dt);
  return s.solve(pb);
}

FieldSnapshot fluid_boundary_stress(const FieldSnapshot& v, const FieldSnapshot& p, const MaterialParams& mat) {
  const auto& mesh = v.space->mesh();
  const int d = mesh.dim();
  SpacePtr bs = boundary_space(v.space->mesh_ptr(), BoundaryTag::GammaL, v.space->degree());
  FieldSnapshot out(bs, d, v.time);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(bs->num_dofs());
  const auto& fbary = shape::node_barycentric(d - 1, v.space->degree());
  for (int e = 0; e < bs->num_elements(); ++e) {
    const auto& f = mesh.facets()[bs->elements()[e]];
    const auto& dofs = bs->element_dofs(e);
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      Eigen::Vector4d lam = facet_point_in_cell(mesh, f, f.fluid_cell, fbary[a]);
      Tensor2 gv = gradient_in_cell(v, f.fluid_cell, lam);
      double pv = value_in_cell(p, f.fluid_cell, lam)(0);
      out.values.segment(dofs[a] * d, d) += cauchy_stress(gv, pv, mat) * f.normal;
      count(dofs[a]) += 1.0;
    }
  }
  for (int i = 0; i < bs->num_dofs(); ++i)
    if (count(i) > 0) out.values.segment(i * d, d) /= count(i);
  return out;
}

Trajectory fluid_boundary_stress(const Trajectory& v, const Trajectory& p, const MaterialParams& mat) {
  Trajectory out;
  out.t0 = v.t0;
  out.dt = v.dt;
  for (int n = 0; n < v.num_levels(); ++n) out.levels.push_back(fluid_boundary_stress(v[n], p[n], mat));
  return out;
}

}  // namespace fsi
