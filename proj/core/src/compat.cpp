#include "fsi/compat.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "fsi/assembly.hpp"
#include "fsi/elastic.hpp"
#include "fsi/errors.hpp"
#include "fsi/operators.hpp"

namespace fsi {

namespace {

struct Operators {
  SpacePtr S, V, P;
  SpMat K, Ms, Mf, A, B, Mp;
  Operators(const MeshPtr& mesh, const MaterialParams& mat) {
    S = solid_space(mesh);
    V = fluid_velocity_space(mesh);
    P = fluid_pressure_space(mesh);
    const int d = mesh->dim();
    K = elasticity_matrix(*S, mat.lambda, mat.mu_hat);
    Ms = expand_components(mass_matrix(*S), d);
    Mf = expand_components(mass_matrix(*V), d);
    A = viscous_matrix(*V, mat.mu);
    B = divergence_matrix(*P, *V);
    Mp = mass_matrix(*P);
  }
};

double weak_norm(const Eigen::VectorXd& r, const SpMat& M, const std::vector<int>& rows) {
  double s = 0.0;
  for (int i : rows) s += r(i) * r(i) / M.coeff(i, i);
  return std::sqrt(s);
}

std::vector<int> all_rows(int n) {
  std::vector<int> r(n);
  for (int i = 0; i < n; ++i) r[i] = i;
  return r;
}

void check_field(const FieldSnapshot& f, const SpacePtr& s, int ncomp, const char* name) {
  if (!f.space || !f.space->same_layout(*s) || f.components != ncomp)
    throw ShapeError(std::string(name) + " does not live on the expected space");
}

double trace_l2_diff(const FieldSnapshot& a, const FieldSnapshot& b) {
  FieldSnapshot ta = trace_extract(a, BoundaryTag::GammaL);
  FieldSnapshot tb = trace_extract(b, BoundaryTag::GammaL);
  ta.values -= tb.values;
  return discrete_norm(ta, NormKind::L2);
}

double normal_flux(const FieldSnapshot& u) {
  const auto& mesh = u.space->mesh();
  const int d = mesh.dim();
  const auto& rule = simplex_rule(d - 1, default_quadrature_points());
  double s = 0.0;
  for (const auto& f : mesh.facets()) {
    if (f.tag != BoundaryTag::GammaL) continue;
    for (int q = 0; q < rule.size(); ++q) {
      Eigen::Vector4d lam = facet_point_in_cell(mesh, f, f.solid_cell, rule.barycentric[q]);
      Eigen::VectorXd val = value_in_cell(u, f.solid_cell, lam);
      s += rule.weights[q] * f.measure * val.dot(f.normal);
    }
  }
  return s;
}

}  // namespace

std::vector<std::string> CompatReport::failed_conditions() const {
  std::vector<std::string> out;
  if (!pass_i) out.emplace_back("(i)");
  if (!pass_ii) out.emplace_back("(ii)");
  if (!pass_iii) out.emplace_back("(iii)");
  if (!pass_iv) out.emplace_back("(iv)");
  return out;
}

std::string CompatReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific;
  os << "residual_i_tractionB = " << residual_i_tractionB << "\n";
  os << "residual_i_velmatch = " << residual_i_velmatch << "\n";
  os << "residual_ii_div = " << residual_ii_div << "\n";
  os << "residual_iii = " << residual_iii << "\n";
  for (int k = 0; k < 4; ++k) os << "residual_iv_" << (k + 1) << " = " << residual_iv[k] << "\n";
  os << "flux_balance = " << flux_balance << "\n";
  os << "tol = " << tol << "\n";
  os << "pass_i = " << (pass_i ? "true" : "false") << "\n";
  os << "pass_ii = " << (pass_ii ? "true" : "false") << "\n";
  os << "pass_iii = " << (pass_iii ? "true" : "false") << "\n";
  os << "pass_iv = " << (pass_iv ? "true" : "false") << "\n";
  std::string failed;
  for (const auto& c : failed_conditions()) failed += (failed.empty() ? "" : " ") + c;
  os << "failed = " << (failed.empty() ? "none" : failed) << "\n";
  return os.str();
}

DataFamily parse_data_family(const std::string& name) {
  if (name == "zero") return DataFamily::Zero;
  if (name == "solid-dilation") return DataFamily::SolidDilation;
  if (name == "tangential-swirl") return DataFamily::TangentialSwirl;
  throw ConfigError("unsupported data family '" + name + "'");
}

Eigen::VectorXd quadratic_divergence_source(const FieldSnapshot& v0) {
  const auto& vs = *v0.space;
  SpacePtr ps = fluid_pressure_space(vs.mesh_ptr());
  const int d = vs.dim();
  const auto& rule = simplex_rule(d, default_quadrature_points());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ps->num_dofs());
  LocalEval ev;
  Eigen::VectorXd psi;
  for (int e = 0; e < vs.num_elements(); ++e) {
    CellGeometry g = cell_geometry(vs.mesh(), space_cell(vs, e));
    const auto& pd = ps->element_dofs(e);
    for (int q = 0; q < rule.size(); ++q) {
      eval_local(d, vs.degree(), rule.barycentric[q], g.grad_lambda, ev);
      shape::values(d, 1, rule.barycentric[q], psi);
      Tensor2 G = field_gradient(v0, e, ev);
      double src = ddot(G, Tensor2(G.transpose()));
      double w = rule.weights[q] * g.volume;
      for (std::size_t i = 0; i < pd.size(); ++i) out(pd[i]) += w * psi(i) * src;
    }
  }
  return out;
}

CompatReport check_compatibility(const InitialData& data, const DerivedData& der, const MeshPtr& mesh,
                                 const MaterialParams& mat, double tol) {
  Operators op(mesh, mat);
  const int d = mesh->dim();
  check_field(data.u0, op.S, d, "u0");
  check_field(data.u1, op.S, d, "u1");
  check_field(data.v0, op.V, d, "v0");
  check_field(der.u2, op.S, d, "u2");
  check_field(der.v1, op.V, d, "v1");
  check_field(der.q0, op.P, 1, "q0");
  CompatReport r;
  r.tol = tol;

  Eigen::VectorXd rs = op.K * data.u0.values + mat.rho_B * (op.Ms * der.u2.values);
  Eigen::VectorXd rf = mat.rho_L * (op.Mf * der.v1.values) + op.A * data.v0.values - op.B.transpose() * der.q0.values;
  Eigen::VectorXd Q = quadratic_divergence_source(data.v0);

  std::vector<int> sB = vector_dofs(op.S->dofs_on(BoundaryTag::GammaB), d);
  std::vector<int> sL = vector_dofs(op.S->dofs_on(BoundaryTag::GammaL), d);
  std::vector<int> sI = vector_dofs(op.S->interior_dofs(), d);
  std::vector<int> fI = vector_dofs(op.V->interior_dofs(), d);

  r.residual_i_tractionB = weak_norm(rs, op.Ms, sB);
  r.residual_i_velmatch = trace_l2_diff(data.u1, data.v0);
  r.residual_ii_div = weak_norm(op.B * data.v0.values, op.Mp, all_rows(op.P->num_dofs()));
  r.residual_iii = weak_norm(rs, op.Ms, sI);
  r.residual_iv[0] = weak_norm(op.B * der.v1.values - Q, op.Mp, all_rows(op.P->num_dofs()));
  r.residual_iv[1] = weak_norm(rf, op.Mf, fI);
  r.residual_iv[2] = trace_l2_diff(der.v1, der.u2);
  {
    Eigen::VectorXd sum(sL.size());
    double s = 0.0;
    for (std::size_t k = 0; k < sL.size(); ++k) {
      int sd = sL[k] / d, c = sL[k] % d;
      int fd = op.V->dof_of_node(op.S->node(sd));
      double v = rs(sL[k]) + rf(vidx(fd, c, d));
      s += v * v / op.Ms.coeff(sL[k], sL[k]);
    }
    r.residual_iv[3] = std::sqrt(s);
  }
  r.flux_balance = Q.sum() - normal_flux(der.u2);

  r.pass_i = std::max(r.residual_i_tractionB, r.residual_i_velmatch) <= tol;
  r.pass_ii = r.residual_ii_div <= tol;
  r.pass_iii = r.residual_iii <= tol;
  double iv = std::abs(r.flux_balance);
  for (double x : r.residual_iv) iv = std::max(iv, x);
  r.pass_iv = iv <= tol;
  return r;
}

DerivedData construct_derived(const InitialData& data, const MeshPtr& mesh, const MaterialParams& mat, double tol) {
  Operators op(mesh, mat);
  const int d = mesh->dim();
  check_field(data.u0, op.S, d, "u0");
  check_field(data.u1, op.S, d, "u1");
  check_field(data.v0, op.V, d, "v0");
  // Union space: one vector dof block per P2 node of the mesh.
  const int nw = mesh->num_nodes(2) * d;
  const int np = op.P->num_dofs();
  auto sidx = [&](int i) { return vidx(op.S->node(i / d), i % d, d); };
  auto fidx = [&](int i) { return vidx(op.V->node(i / d), i % d, d); };
  Triplets t;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nw + np);
  SpMat Ms = mat.rho_B * op.Ms, Mf = mat.rho_L * op.Mf;
  for (int k = 0; k < Ms.outerSize(); ++k)
    for (SpMat::InnerIterator it(Ms, k); it; ++it) t.emplace_back(sidx(it.row()), sidx(it.col()), it.value());
  for (int k = 0; k < Mf.outerSize(); ++k)
    for (SpMat::InnerIterator it(Mf, k); it; ++it) t.emplace_back(fidx(it.row()), fidx(it.col()), it.value());
  for (int k = 0; k < op.B.outerSize(); ++k)
    for (SpMat::InnerIterator it(op.B, k); it; ++it) {
      t.emplace_back(fidx(it.col()), nw + it.row(), -it.value());
      t.emplace_back(nw + it.row(), fidx(it.col()), -it.value());
    }
  Eigen::VectorXd Ku = op.K * data.u0.values;
  Eigen::VectorXd Av = op.A * data.v0.values;
  for (int i = 0; i < Ku.size(); ++i) rhs(sidx(i)) -= Ku(i);
  for (int i = 0; i < Av.size(); ++i) rhs(fidx(i)) -= Av(i);
  Eigen::VectorXd Q = quadratic_divergence_source(data.v0);
  rhs.tail(np) = -Q;
  // Nodes outside both regions cannot occur; guard the diagonal anyway.
  std::vector<char> used(nw, 0);
  for (int i = 0; i < op.S->num_dofs() * d; ++i) used[sidx(i)] = 1;
  for (int i = 0; i < op.V->num_dofs() * d; ++i) used[fidx(i)] = 1;
  for (int i = 0; i < nw; ++i)
    if (!used[i]) t.emplace_back(i, i, 1.0);
  SpMat Kkt(nw + np, nw + np);
  Kkt.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(Kkt);
  lu.factorize(Kkt);
  if (lu.info() != Eigen::Success) throw FluxImbalance("initial acceleration system is singular");
  Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw FluxImbalance("initial acceleration system produced non-finite values");

  DerivedData out;
  out.u2 = FieldSnapshot(op.S, d, data.u0.time);
  out.v1 = FieldSnapshot(op.V, d, data.v0.time);
  out.q0 = FieldSnapshot(op.P, 1, x.tail(np), data.v0.time);
  for (int i = 0; i < op.S->num_dofs() * d; ++i) out.u2.values(i) = x(sidx(i));
  for (int i = 0; i < op.V->num_dofs() * d; ++i) out.v1.values(i) = x(fidx(i));
  Eigen::VectorXd cres = op.B * out.v1.values - Q;
  double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if (cres.cwiseAbs().maxCoeff() > tol * scale)
    throw FluxImbalance("divergence condition on v1 cannot be met: flux balance violated");
  return out;
}

namespace {

FieldSnapshot rotation(const SpacePtr& s, double a) {
  return interpolate_vector(
      s,
      [a](const SmallVec& X, double) {
        SmallVec v = SmallVec::Zero(X.size());
        v(0) = -a * X(1);
        v(1) = a * X(0);
        return v;
      },
      0.0);
}

// a |X|^2 (-X2, X1, 0): tangential on spheres about the origin and
// divergence free, with shear so that it dissipates and strains the solid.
FieldSnapshot sheared_swirl(const SpacePtr& s, double a) {
  return interpolate_vector(
      s,
      [a](const SmallVec& X, double) {
        double r2 = X.squaredNorm();
        SmallVec v = SmallVec::Zero(X.size());
        v(0) = -a * r2 * X(1);
        v(1) = a * r2 * X(0);
        return v;
      },
      0.0);
}

// Mass-orthogonal projection onto discretely divergence-free fields (B v = 0).
FieldSnapshot divergence_free_projection(const Operators& op, const FieldSnapshot& v) {
  const int n = static_cast<int>(op.Mf.rows()), m = static_cast<int>(op.B.rows());
  Triplets t;
  for (int k = 0; k < op.Mf.outerSize(); ++k)
    for (SpMat::InnerIterator it(op.Mf, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < op.B.outerSize(); ++k)
    for (SpMat::InnerIterator it(op.B, k); it; ++it) {
      t.emplace_back(n + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), n + it.row(), it.value());
    }
  SpMat kkt(n + m, n + m);
  kkt.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu;
  lu.compute(kkt);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("divergence-free projection is singular");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  rhs.head(n) = op.Mf * v.values;
  Eigen::VectorXd x = lu.solve(rhs);
  FieldSnapshot out = v;
  out.values = x.head(n);
  return out;
}

// Static state under a uniform cavity pressure: K u = B^T q restricted to
// GammaL, with rigid motions removed by Lagrange multipliers.
FieldSnapshot pressurized_state(const Operators& op, double a, int d) {
  const int ns = op.S->num_dofs() * d;
  Eigen::VectorXd q = Eigen::VectorXd::Constant(op.P->num_dofs(), a);
  Eigen::VectorXd btq = op.B.transpose() * q;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(ns);
  for (int sd : op.S->dofs_on(BoundaryTag::GammaL)) {
    int fd = op.V->dof_of_node(op.S->node(sd));
    for (int c = 0; c < d; ++c) load(vidx(sd, c, d)) = btq(vidx(fd, c, d));
  }
  const int nr = d == 2 ? 3 : 6;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(ns, nr);
  for (int i = 0; i < op.S->num_dofs(); ++i) {
    SmallVec x = op.S->dof_coord(i);
    for (int c = 0; c < d; ++c) R(vidx(i, c, d), c) = 1.0;
    if (d == 2) {
      R(vidx(i, 0, 2), 2) = -x(1);
      R(vidx(i, 1, 2), 2) = x(0);
    } else {
      // rotations about the three axes
      R(vidx(i, 1, 3), 3) = -x(2);
      R(vidx(i, 2, 3), 3) = x(1);
      R(vidx(i, 0, 3), 4) = x(2);
      R(vidx(i, 2, 3), 4) = -x(0);
      R(vidx(i, 0, 3), 5) = -x(1);
      R(vidx(i, 1, 3), 5) = x(0);
    }
  }
  // Pin a minimal non-degenerate set of dofs, solve, then remove the rigid
  // part in the mass inner product. The load is balanced, so pinning only
  // selects a representative.
  std::vector<int> pinned;
  {
    int a = 0, b = 0, c = 0;
    double best = -1.0;
    for (int i = 0; i < op.S->num_dofs(); ++i) {
      double r2 = (op.S->dof_coord(i) - op.S->dof_coord(a)).norm();
      if (r2 > best) { best = r2; b = i; }
    }
    best = -1.0;
    for (int i = 0; i < op.S->num_dofs(); ++i) {
      SmallVec e1 = op.S->dof_coord(b) - op.S->dof_coord(a);
      SmallVec w = op.S->dof_coord(i) - op.S->dof_coord(a);
      double area = (w - e1 * (w.dot(e1) / e1.squaredNorm())).norm();
      if (area > best) { best = area; c = i; }
    }
    for (int k = 0; k < d; ++k) pinned.push_back(vidx(a, k, d));
    // second point: components not along (b - a) dominate; pin the remaining ones
    SmallVec e1 = op.S->dof_coord(b) - op.S->dof_coord(a);
    int along = 0;
    for (int k = 1; k < d; ++k) if (std::abs(e1(k)) > std::abs(e1(along))) along = k;
    for (int k = 0; k < d; ++k) if (k != along) pinned.push_back(vidx(b, k, d));
    if (d == 3) {
      SmallVec w = op.S->dof_coord(c) - op.S->dof_coord(a);
      Eigen::Vector3d nrm = Eigen::Vector3d(e1).cross(Eigen::Vector3d(w));
      int k3 = 0;
      for (int k = 1; k < 3; ++k) if (std::abs(nrm(k)) > std::abs(nrm(k3))) k3 = k;
      pinned.push_back(vidx(c, k3, d));
    }
  }
  std::vector<char> is_p(ns, 0);
  for (int i : pinned) is_p[i] = 1;
  std::vector<int> free;
  for (int i = 0; i < ns; ++i) if (!is_p[i]) free.push_back(i);
  SpMat Pf = selection(free, ns);
  SpMat Kff = Pf * op.K * Pf.transpose();
  Eigen::SimplicialLDLT<SpMat> ldlt(Kff);
  if (ldlt.info() != Eigen::Success) throw SolverError("static elastic system is singular");
  Eigen::VectorXd uf = ldlt.solve(Pf * load);
  Eigen::VectorXd u = Pf.transpose() * uf;
  Eigen::MatrixXd MR = op.Ms * R;
  Eigen::VectorXd coef = (R.transpose() * MR).ldlt().solve(MR.transpose() * u);
  u -= R * coef;
  return FieldSnapshot(op.S, d, u, 0.0);
}

}  // namespace

std::pair<InitialData, DerivedData> generate_compatible_data(DataFamily family, double amplitude, const MeshPtr& mesh,
                                                            const MaterialParams& mat) {
  mat.validate();
  Operators op(mesh, mat);
  const int d = mesh->dim();
  InitialData data;
  data.u0 = FieldSnapshot(op.S, d, 0.0);
  data.u1 = FieldSnapshot(op.S, d, 0.0);
  data.v0 = FieldSnapshot(op.V, d, 0.0);
  switch (family) {
    case DataFamily::Zero:
      break;
    case DataFamily::SolidDilation:
      data.u0 = pressurized_state(op, amplitude, d);
      break;
    case DataFamily::TangentialSwirl: {
      data.v0 = divergence_free_projection(op, sheared_swirl(op.V, amplitude));
      data.u1 = sheared_swirl(op.S, amplitude);
      const int d = mesh->dim();
      for (int sd : op.S->dofs_on(BoundaryTag::GammaL)) {
        int vd = op.V->dof_of_node(op.S->node(sd));
        for (int c = 0; c < d; ++c) data.u1.at(sd, c) = data.v0.at(vd, c);
      }
      break;
    }
  }
  DerivedData der = construct_derived(data, mesh, mat);
  return {std::move(data), std::move(der)};
}

std::pair<InitialData, DerivedData> flux_violating_fixture(double amplitude, const MeshPtr& mesh,
                                                          const MaterialParams& mat) {
  Operators op(mesh, mat);
  const int d = mesh->dim();
  InitialData data;
  data.u0 = FieldSnapshot(op.S, d, 0.0);
  data.u1 = rotation(op.S, amplitude);
  data.v0 = rotation(op.V, amplitude);
  DerivedData der;
  der.u2 = FieldSnapshot(op.S, d, 0.0);
  der.v1 = FieldSnapshot(op.V, d, 0.0);
  der.q0 = FieldSnapshot(op.P, 1, 0.0);
  return {std::move(data), std::move(der)};
}

}  // namespace fsi
