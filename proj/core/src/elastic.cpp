#include "fsi/elastic.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "fsi/errors.hpp"
#include "fsi/operators.hpp"

namespace fsi {

namespace {

SpacePtr cached_space(const MeshPtr& mesh, int kind) {
  static std::mutex mtx;
  static std::map<std::pair<const ReferenceMesh*, int>, std::pair<std::weak_ptr<const ReferenceMesh>, SpacePtr>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(mesh.get(), kind);
  auto it = cache.find(key);
  if (it != cache.end() && it->second.first.lock() == mesh) return it->second.second;
  SpacePtr s = kind == 0   ? FunctionSpace::volume(mesh, Region::Solid, 2)
               : kind == 1 ? FunctionSpace::volume(mesh, Region::Fluid, 2)
                           : FunctionSpace::volume(mesh, Region::Fluid, 1);
  cache[key] = {mesh, s};
  return s;
}

}  // namespace

SpacePtr solid_space(const MeshPtr& mesh) { return cached_space(mesh, 0); }
SpacePtr fluid_velocity_space(const MeshPtr& mesh) { return cached_space(mesh, 1); }
SpacePtr fluid_pressure_space(const MeshPtr& mesh) { return cached_space(mesh, 2); }

SpMat selection(const std::vector<int>& rows, int n) {
  Triplets t;
  for (std::size_t i = 0; i < rows.size(); ++i) t.emplace_back(static_cast<int>(i), rows[i], 1.0);
  SpMat P(static_cast<int>(rows.size()), n);
  P.setFromTriplets(t.begin(), t.end());
  return P;
}

std::vector<int> vector_dofs(const std::vector<int>& dofs, int d) {
  std::vector<int> out;
  out.reserve(dofs.size() * d);
  for (int a : dofs)
    for (int c = 0; c < d; ++c) out.push_back(vidx(a, c, d));
  return out;
}

ElasticSolver::ElasticSolver(MeshPtr mesh, const MaterialParams& mat, double dt)
    : mesh_(std::move(mesh)), mat_(mat), dt_(dt) {
  mat_.validate();
  if (!(dt_ > 0)) throw ConfigError("time step must be positive");
  space_ = solid_space(mesh_);
  const int d = mesh_->dim();
  const int n = space_->num_dofs() * d;
  K_ = elasticity_matrix(*space_, mat_.lambda, mat_.mu_hat);
  M0_ = expand_components(mass_matrix(*space_), d);
  M_ = mat_.rho_B * M0_;
  if (has_tag(*mesh_, BoundaryTag::GammaL)) cdofs_ = vector_dofs(space_->dofs_on(BoundaryTag::GammaL), d);
  if (has_tag(*mesh_, BoundaryTag::GammaB)) gammaB_dofs_ = vector_dofs(space_->dofs_on(BoundaryTag::GammaB), d);
  std::vector<char> is_c(n, 0);
  for (int i : cdofs_) is_c[i] = 1;
  for (int i = 0; i < n; ++i)
    if (!is_c[i]) fdofs_.push_back(i);
  Pf_ = selection(fdofs_, n);
  Pc_ = selection(cdofs_, n);
  SpMat Keff = K_ + (4.0 / (dt_ * dt_)) * M_;
  Kff_ = Pf_ * Keff * Pf_.transpose();
  Keff_fc_ = Pf_ * Keff * Pc_.transpose();
  Mff_ = Pf_ * M_ * Pf_.transpose();
  M_fc_ = Pf_ * M_ * Pc_.transpose();
  keff_ = std::make_unique<CG>();
  keff_->setTolerance(1e-13);
  keff_->setMaxIterations(20 * static_cast<int>(fdofs_.size()) + 100);
  keff_->compute(Kff_);
  if (keff_->info() != Eigen::Success) throw SingularMatrixError("effective elastic matrix factorization failed");
  mff_ = std::make_unique<CG>();
  mff_->setTolerance(1e-13);
  mff_->compute(Mff_);
  if (mff_->info() != Eigen::Success) throw SingularMatrixError("solid mass factorization failed");
}

SolidTrajectory ElasticSolver::solve(const ElasticProblem& pb) const {
  const int d = mesh_->dim();
  const int N = pb.window.steps();
  if (std::abs(pb.window.dt - dt_) > 1e-12 * dt_) throw ConfigError("problem time step differs from solver time step");
  if (!pb.u0.space || !pb.u0.space->same_layout(*space_) || pb.u0.components != d) throw ShapeError("u0 must be a solid P2 vector field");
  if (!pb.u1.space || !pb.u1.space->same_layout(*space_) || pb.u1.components != d) throw ShapeError("u1 must be a solid P2 vector field");
  const int n = space_->num_dofs() * d;
  const double t0 = pb.window.t0;

  // Constrained values of w at each level, in cdofs_ order.
  std::vector<Eigen::VectorXd> wc(N + 1, Eigen::VectorXd::Zero(cdofs_.size()));
  if (!pb.gamma_L_velocity.empty()) {
    const auto& tw = pb.gamma_L_velocity;
    if (tw.num_levels() != N + 1) throw ShapeError("gamma_L_velocity must have one level per time step");
    const auto& bs = tw[0].space;
    if (!bs->is_boundary() || bs->boundary_tag() != BoundaryTag::GammaL || bs->degree() != 2 || tw[0].components != d)
      throw ShapeError("gamma_L_velocity must be a P2 vector field on gamma_L");
    for (std::size_t k = 0; k < cdofs_.size(); ++k) {
      int sdof = cdofs_[k] / d, c = cdofs_[k] % d;
      int bdof = bs->dof_of_node(space_->node(sdof));
      if (bdof < 0) throw ShapeError("gamma_L node missing from boundary velocity space");
      for (int m = 0; m <= N; ++m) wc[m](k) = tw[m].values(vidx(bdof, c, d));
    }
  }
  std::vector<Eigen::VectorXd> fload(N + 1, Eigen::VectorXd::Zero(n));
  if (!pb.body_force.empty()) {
    if (pb.body_force.num_levels() != N + 1) throw ShapeError("body_force must have one level per time step");
    for (int m = 0; m <= N; ++m) {
      if (!pb.body_force[m].space->same_layout(*space_)) throw ShapeError("body_force must live on the solid P2 space");
      fload[m] = M0_ * pb.body_force[m].values;
    }
  }

  Eigen::VectorXd u = pb.u0.values, v = pb.u1.values;
  {
    double wmax = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < cdofs_.size(); ++k) {
      wmax = std::max(wmax, std::abs(wc[0](k)));
      diff = std::max(diff, std::abs(v(cdofs_[k]) - wc[0](k)));
    }
    if (diff > pb.compat_tol * (1.0 + wmax))
      throw CompatibilityError("u1 does not match the prescribed gamma_L velocity at t0");
  }

  // Initial acceleration: prescribed part from dw/dt, free part from the equation.
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd ac = Eigen::VectorXd::Zero(cdofs_.size());
  if (N >= 2)
    ac = (-3.0 * wc[0] + 4.0 * wc[1] - wc[2]) / (2.0 * dt_);
  else
    ac = (wc[1] - wc[0]) / dt_;
  {
    Eigen::VectorXd rhs = Pf_ * (fload[0] - K_ * u) - M_fc_ * ac;
    Eigen::VectorXd af = mff_->solve(rhs);
    a = Pf_.transpose() * af + Pc_.transpose() * ac;
  }

  SolidTrajectory out;
  auto push = [&](Trajectory& tr, const Eigen::VectorXd& x, double t) {
    tr.levels.emplace_back(space_, d, x, t);
  };
  for (Trajectory* tr : {&out.u, &out.u_t, &out.u_tt}) {
    tr->t0 = t0;
    tr->dt = dt_;
  }
  auto residual_B = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd& aa, const Eigen::VectorXd& ff) {
    if (gammaB_dofs_.empty()) return 0.0;
    Eigen::VectorXd r = M_ * aa + K_ * uu - ff;
    double s = 0.0;
    for (int i : gammaB_dofs_) s += r(i) * r(i);
    return std::sqrt(s);
  };
  SpacePtr bs = cdofs_.empty() ? nullptr : boundary_space(mesh_, BoundaryTag::GammaL, 2);
  auto reaction = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd& aa, const Eigen::VectorXd& ff) {
    Eigen::VectorXd r = M_ * aa + K_ * uu - ff;
    Eigen::VectorXd out_r = Eigen::VectorXd::Zero(bs->num_dofs() * d);
    for (int i : cdofs_) out_r(vidx(bs->dof_of_node(space_->node(i / d)), i % d, d)) = r(i);
    return out_r;
  };
  push(out.u, u, t0);
  push(out.u_t, v, t0);
  push(out.u_tt, a, t0);
  out.traction_gamma_B_residual.push_back(residual_B(u, a, fload[0]));
  if (bs) out.interface_reaction.push_back(reaction(u, a, fload[0]));

  const double c4 = 4.0 / (dt_ * dt_);
  Eigen::VectorXd uc = Pc_ * u;
  for (int m = 0; m < N; ++m) {
    uc += 0.5 * dt_ * (wc[m] + wc[m + 1]);
    Eigen::VectorXd rhs = fload[m + 1] + M_ * (c4 * (u + dt_ * v) + a);
    Eigen::VectorXd bf = Pf_ * rhs - Keff_fc_ * uc;
    Eigen::VectorXd uf = keff_->solveWithGuess(bf, Pf_ * (u + dt_ * v + 0.25 * dt_ * dt_ * a));
    if (keff_->info() != Eigen::Success) throw SingularMatrixError("effective elastic solve did not converge");
    if (!uf.allFinite()) throw SolverError("elastic step produced non-finite values");
    Eigen::VectorXd un = Pf_.transpose() * uf + Pc_.transpose() * uc;
    Eigen::VectorXd an = c4 * (un - u - dt_ * v) - a;
    Eigen::VectorXd vn = v + 0.5 * dt_ * (a + an);
    u = std::move(un);
    v = std::move(vn);
    a = std::move(an);
    double t = pb.window.time(m + 1);
    push(out.u, u, t);
    push(out.u_t, v, t);
    push(out.u_tt, a, t);
    out.traction_gamma_B_residual.push_back(residual_B(u, a, fload[m + 1]));
    if (bs) out.interface_reaction.push_back(reaction(u, a, fload[m + 1]));
  }
  if (!cdofs_.empty()) out.traction_gamma_L = interface_traction(out.u, pb.mat);
  return out;
}

SolidTrajectory solve_elastic(const ElasticProblem& pb) {
  ElasticSolver s(pb.mesh, pb.mat, pb.window.dt);
  return s.solve(pb);
}

FieldSnapshot interface_traction(const FieldSnapshot& u, const MaterialParams& mat) {
  const auto& mesh = u.space->mesh();
  const int d = mesh.dim();
  SpacePtr bs = boundary_space(u.space->mesh_ptr(), BoundaryTag::GammaL, u.space->degree());
  FieldSnapshot out(bs, d, u.time);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(bs->num_dofs());
  const auto& fbary = shape::node_barycentric(d - 1, u.space->degree());
  for (int e = 0; e < bs->num_elements(); ++e) {
    const auto& f = mesh.facets()[bs->elements()[e]];
    const auto& dofs = bs->element_dofs(e);
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      Eigen::Vector4d lam = facet_point_in_cell(mesh, f, f.solid_cell, fbary[a]);
      Tensor2 gu = gradient_in_cell(u, f.solid_cell, lam);
      SmallVec tr = piola_stress(gu, mat) * f.normal;
      out.values.segment(dofs[a] * d, d) += tr;
      count(dofs[a]) += 1.0;
    }
  }
  for (int i = 0; i < bs->num_dofs(); ++i)
    if (count(i) > 0) out.values.segment(i * d, d) /= count(i);
  return out;
}

Trajectory interface_traction(const Trajectory& u, const MaterialParams& mat) {
  Trajectory out;
  out.t0 = u.t0;
  out.dt = u.dt;
  for (const auto& l : u.levels) out.levels.push_back(interface_traction(l, mat));
  return out;
}

}  // namespace fsi
