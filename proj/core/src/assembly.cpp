#include "fsi/assembly.hpp"

#include <Eigen/Dense>

#include "fsi/errors.hpp"

namespace fsi {

int default_quadrature_points() { return 4; }

int quadrature_points_for(int dim, int degree) {
  // collapsed Gauss with n points is exact for total degree 2n - dim
  int n = (degree + dim + 1) / 2;
  return std::max(n, 1);
}

SmallVec CellGeometry::point(const Eigen::Vector4d& lam) const {
  SmallVec x = SmallVec::Zero(vertices.rows());
  for (int i = 0; i < vertices.cols(); ++i) x += lam(i) * vertices.col(i);
  return x;
}

CellGeometry cell_geometry(const ReferenceMesh& mesh, int cell) {
  const int d = mesh.dim();
  CellGeometry g;
  g.vertices.resize(d, d + 1);
  const auto& c = mesh.cell(cell);
  for (int i = 0; i <= d; ++i) g.vertices.col(i) = mesh.vertex(c[i]);
  Eigen::MatrixXd J(d, d);
  for (int k = 0; k < d; ++k) J.col(k) = g.vertices.col(k + 1) - g.vertices.col(0);
  double det = J.determinant();
  g.volume = std::abs(det) / (d == 2 ? 2.0 : 6.0);
  Eigen::MatrixXd JinvT = J.inverse().transpose();
  g.grad_lambda.resize(d, d + 1);
  g.grad_lambda.rightCols(d) = JinvT;
  g.grad_lambda.col(0) = -JinvT.rowwise().sum();
  return g;
}

Eigen::Vector4d facet_point_in_cell(const ReferenceMesh& mesh, const BoundaryFacet& f, int cell,
                                    const Eigen::Vector4d& mu) {
  const int d = mesh.dim();
  Eigen::Vector4d lam = Eigen::Vector4d::Zero();
  const auto& c = mesh.cell(cell);
  for (int k = 0; k < d; ++k) {
    int found = -1;
    for (int i = 0; i <= d; ++i)
      if (c[i] == f.vertices[k]) found = i;
    if (found < 0) throw MeshError("facet is not a face of the given cell");
    lam(found) = mu(k);
  }
  return lam;
}

SpMat expand_components(const SpMat& s, int ncomp) {
  Triplets t;
  t.reserve(s.nonZeros() * ncomp);
  for (int k = 0; k < s.outerSize(); ++k)
    for (SpMat::InnerIterator it(s, k); it; ++it)
      for (int c = 0; c < ncomp; ++c) t.emplace_back(vidx(it.row(), c, ncomp), vidx(it.col(), c, ncomp), it.value());
  SpMat out(s.rows() * ncomp, s.cols() * ncomp);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

void eval_local(int dim, int degree, const Eigen::Vector4d& lam, const Eigen::MatrixXd& grad_lam, LocalEval& out) {
  shape::values(dim, degree, lam, out.phi);
  shape::gradients(dim, degree, lam, grad_lam, out.dphi);
}

Eigen::VectorXd field_value(const FieldSnapshot& f, int e, const LocalEval& ev) {
  const auto& dofs = f.space->element_dofs(e);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(f.components);
  for (std::size_t a = 0; a < dofs.size(); ++a)
    v += ev.phi(a) * f.values.segment(dofs[a] * f.components, f.components);
  return v;
}

Eigen::MatrixXd field_gradient(const FieldSnapshot& f, int e, const LocalEval& ev) {
  const auto& dofs = f.space->element_dofs(e);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(f.components, ev.dphi.cols());
  for (std::size_t a = 0; a < dofs.size(); ++a)
    g += f.values.segment(dofs[a] * f.components, f.components) * ev.dphi.row(a);
  return g;
}

Eigen::MatrixXd gradient_in_cell(const FieldSnapshot& f, int cell, const Eigen::Vector4d& lam) {
  int e = f.space->element_of(cell);
  if (e < 0 || f.space->is_boundary()) throw ShapeError("cell is not part of the field's region");
  CellGeometry g = cell_geometry(f.space->mesh(), cell);
  LocalEval ev;
  eval_local(f.space->dim(), f.space->degree(), lam, g.grad_lambda, ev);
  return field_gradient(f, e, ev);
}

Eigen::VectorXd value_in_cell(const FieldSnapshot& f, int cell, const Eigen::Vector4d& lam) {
  int e = f.space->element_of(cell);
  if (e < 0 || f.space->is_boundary()) throw ShapeError("cell is not part of the field's region");
  LocalEval ev;
  shape::values(f.space->dim(), f.space->degree(), lam, ev.phi);
  return field_value(f, e, ev);
}

namespace {

template <class Kernel>
SpMat assemble_volume_scalar(const FunctionSpace& s, Kernel&& kernel) {
  if (s.is_boundary()) throw ShapeError("volume assembler called on a boundary space");
  const int d = s.dim();
  const auto& rule = simplex_rule(d, default_quadrature_points());
  Triplets t;
  LocalEval ev;
  for (int e = 0; e < s.num_elements(); ++e) {
    CellGeometry g = cell_geometry(s.mesh(), space_cell(s, e));
    const auto& dofs = s.element_dofs(e);
    const int nl = static_cast<int>(dofs.size());
    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(nl, nl);
    kernel(g, rule, loc);
    for (int a = 0; a < nl; ++a)
      for (int b = 0; b < nl; ++b)
        if (loc(a, b) != 0.0) t.emplace_back(dofs[a], dofs[b], loc(a, b));
  }
  SpMat m(s.num_dofs(), s.num_dofs());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

SpMat mass_matrix(const FunctionSpace& s) {
  const int d = s.dim();
  if (s.is_boundary()) {
    const auto& rule = simplex_rule(d - 1, default_quadrature_points());
    Triplets t;
    Eigen::VectorXd phi;
    for (int e = 0; e < s.num_elements(); ++e) {
      const auto& f = s.mesh().facets()[s.elements()[e]];
      const auto& dofs = s.element_dofs(e);
      for (int q = 0; q < rule.size(); ++q) {
        shape::values(d - 1, s.degree(), rule.barycentric[q], phi);
        double w = rule.weights[q] * f.measure;
        for (std::size_t a = 0; a < dofs.size(); ++a)
          for (std::size_t b = 0; b < dofs.size(); ++b) t.emplace_back(dofs[a], dofs[b], w * phi(a) * phi(b));
      }
    }
    SpMat m(s.num_dofs(), s.num_dofs());
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }
  return assemble_volume_scalar(s, [&](const CellGeometry& g, const QuadratureRule&, Eigen::MatrixXd& loc) {
    const auto& rule = simplex_rule(d, quadrature_points_for(d, 2 * s.degree()));
    Eigen::VectorXd phi;
    for (int q = 0; q < rule.size(); ++q) {
      shape::values(d, s.degree(), rule.barycentric[q], phi);
      loc += rule.weights[q] * g.volume * phi * phi.transpose();
    }
  });
}

SpMat gradient_gram(const FunctionSpace& s) {
  const int d = s.dim();
  return assemble_volume_scalar(s, [&](const CellGeometry& g, const QuadratureRule&, Eigen::MatrixXd& loc) {
    const auto& rule = simplex_rule(d, quadrature_points_for(d, 2 * (s.degree() - 1)));
    Eigen::MatrixXd dphi;
    for (int q = 0; q < rule.size(); ++q) {
      shape::gradients(d, s.degree(), rule.barycentric[q], g.grad_lambda, dphi);
      loc += rule.weights[q] * g.volume * dphi * dphi.transpose();
    }
  });
}

SpMat hessian_gram(const FunctionSpace& s) {
  const int d = s.dim();
  return assemble_volume_scalar(s, [&](const CellGeometry& g, const QuadratureRule&, Eigen::MatrixXd& loc) {
    std::vector<Eigen::MatrixXd> H;
    shape::hessians(d, s.degree(), g.grad_lambda, H);
    for (std::size_t a = 0; a < H.size(); ++a)
      for (std::size_t b = 0; b < H.size(); ++b) loc(a, b) = g.volume * (H[a].array() * H[b].array()).sum();
  });
}

namespace {

// int c_div div u div w + c_sym (grad u : grad w + grad u : grad w^T).
// For w = phi_a e_i, u = phi_b e_j the block entry is
//   c_div ga_i gb_j + c_sym (ga.gb delta_ij + gb_i ga_j).
SpMat assemble_vector_form(const FunctionSpace& s, double c_div, double c_sym) {
  if (s.is_boundary()) throw ShapeError("volume assembler called on a boundary space");
  const int d = s.dim();
  const auto& rule = simplex_rule(d, quadrature_points_for(d, 2 * (s.degree() - 1)));
  Triplets t;
  Eigen::MatrixXd dphi;
  const int nl = shape::num_local(d, s.degree());
  t.reserve(static_cast<std::size_t>(s.num_elements()) * nl * nl * d * d);
  Eigen::MatrixXd loc(nl * d, nl * d);
  for (int e = 0; e < s.num_elements(); ++e) {
    CellGeometry g = cell_geometry(s.mesh(), space_cell(s, e));
    const auto& dofs = s.element_dofs(e);
    loc.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      shape::gradients(d, s.degree(), rule.barycentric[q], g.grad_lambda, dphi);
      const double w = rule.weights[q] * g.volume;
      for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nl; ++b) {
          double gg = 0.0;
          for (int k = 0; k < d; ++k) gg += dphi(a, k) * dphi(b, k);
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
              double v = c_div * dphi(a, i) * dphi(b, j) + c_sym * dphi(b, i) * dphi(a, j);
              if (i == j) v += c_sym * gg;
              loc(a * d + i, b * d + j) += w * v;
            }
        }
    }
    for (int a = 0; a < nl; ++a)
      for (int b = 0; b < nl; ++b)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            double v = loc(a * d + i, b * d + j);
            if (v != 0.0) t.emplace_back(vidx(dofs[a], i, d), vidx(dofs[b], j, d), v);
          }
  }
  SpMat m(s.num_dofs() * d, s.num_dofs() * d);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

SpMat elasticity_matrix(const FunctionSpace& s, double lambda, double mu_hat) {
  return assemble_vector_form(s, lambda, mu_hat);
}

SpMat viscous_matrix(const FunctionSpace& s, double mu) { return assemble_vector_form(s, 0.0, mu); }

SpMat mixed_mass(const FunctionSpace& ts, const FunctionSpace& rs) {
  if (&ts.mesh() != &rs.mesh() || ts.region() != rs.region() || ts.is_boundary())
    throw ShapeError("mixed mass needs volume spaces on one region");
  const int d = ts.dim();
  const auto& rule = simplex_rule(d, quadrature_points_for(d, ts.degree() + rs.degree()));
  Triplets t;
  Eigen::VectorXd a, b;
  Eigen::MatrixXd loc;
  for (int e = 0; e < ts.num_elements(); ++e) {
    CellGeometry g = cell_geometry(ts.mesh(), space_cell(ts, e));
    const auto& td = ts.element_dofs(e);
    const auto& rd = rs.element_dofs(e);
    loc.setZero(td.size(), rd.size());
    for (int q = 0; q < rule.size(); ++q) {
      shape::values(d, ts.degree(), rule.barycentric[q], a);
      shape::values(d, rs.degree(), rule.barycentric[q], b);
      loc += (rule.weights[q] * g.volume) * a * b.transpose();
    }
    for (std::size_t i = 0; i < td.size(); ++i)
      for (std::size_t j = 0; j < rd.size(); ++j) t.emplace_back(td[i], rd[j], loc(i, j));
  }
  SpMat m(ts.num_dofs(), rs.num_dofs());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat divergence_matrix(const FunctionSpace& ps, const FunctionSpace& vs) {
  if (&ps.mesh() != &vs.mesh() || ps.region() != vs.region() || ps.is_boundary())
    throw ShapeError("pressure and velocity spaces must share mesh and region");
  const int d = vs.dim();
  const auto& rule = simplex_rule(d, quadrature_points_for(d, ps.degree() + vs.degree() - 1));
  Triplets t;
  Eigen::VectorXd psi;
  Eigen::MatrixXd dphi, loc;
  for (int e = 0; e < vs.num_elements(); ++e) {
    CellGeometry g = cell_geometry(vs.mesh(), space_cell(vs, e));
    const auto& vd = vs.element_dofs(e);
    const auto& pd = ps.element_dofs(e);
    loc.setZero(pd.size(), vd.size() * d);
    for (int q = 0; q < rule.size(); ++q) {
      shape::values(d, ps.degree(), rule.barycentric[q], psi);
      shape::gradients(d, vs.degree(), rule.barycentric[q], g.grad_lambda, dphi);
      double w = rule.weights[q] * g.volume;
      for (std::size_t i = 0; i < pd.size(); ++i)
        for (std::size_t a = 0; a < vd.size(); ++a)
          for (int c = 0; c < d; ++c) loc(i, a * d + c) += w * psi(i) * dphi(a, c);
    }
    for (std::size_t i = 0; i < pd.size(); ++i)
      for (std::size_t a = 0; a < vd.size(); ++a)
        for (int c = 0; c < d; ++c) t.emplace_back(pd[i], vidx(vd[a], c, d), loc(i, a * d + c));
  }
  SpMat m(ps.num_dofs(), vs.num_dofs() * d);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace fsi
