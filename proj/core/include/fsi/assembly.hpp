#pragma once

#include <functional>

#include <Eigen/Sparse>

#include "fsi/fe_space.hpp"
#include "fsi/field.hpp"
#include "fsi/quadrature.hpp"

namespace fsi {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

/// Affine geometry of one cell.
struct CellGeometry {
  Eigen::MatrixXd grad_lambda;  // d x (d+1), physical gradients of barycentric coordinates
  double volume = 0.0;
  Eigen::MatrixXd vertices;     // d x (d+1)
  SmallVec point(const Eigen::Vector4d& lam) const;
};
CellGeometry cell_geometry(const ReferenceMesh& mesh, int cell);

/// Barycentric coordinates, relative to `cell`, of a point on boundary facet
/// `f` with facet barycentric coordinates `mu`.
Eigen::Vector4d facet_point_in_cell(const ReferenceMesh& mesh, const BoundaryFacet& f, int cell,
                                    const Eigen::Vector4d& mu);

/// Position of element e of a volume space inside mesh().cell(...), i.e. the
/// local node order of that space element.
inline int space_cell(const FunctionSpace& s, int e) { return s.elements()[e]; }

/// Index of dof `dof`, component `c` in an interleaved vector of `ncomp` components.
inline int vidx(int dof, int c, int ncomp) { return dof * ncomp + c; }

/// Expands a scalar matrix to `ncomp` interleaved components (kron with I).
SpMat expand_components(const SpMat& scalar, int ncomp);

/// Scalar mass matrix on a volume or boundary space.
SpMat mass_matrix(const FunctionSpace& s);
/// Scalar gradient Gram matrix (int grad a . grad b).
SpMat gradient_gram(const FunctionSpace& s);
/// Scalar broken Hessian Gram matrix (sum over cells of int D2 a : D2 b).
SpMat hessian_gram(const FunctionSpace& s);
/// int lambda div u div w + 2 mu_hat e(u):e(w) on a vector space.
SpMat elasticity_matrix(const FunctionSpace& s, double lambda, double mu_hat);
/// int 2 mu D(v):D(w) on a vector space.
SpMat viscous_matrix(const FunctionSpace& s, double mu);
/// B(q, v) = int q div v; rows = pressure dofs, columns = interleaved velocity dofs.
SpMat divergence_matrix(const FunctionSpace& pressure, const FunctionSpace& velocity);

/// Mixed scalar mass int a b between two volume spaces on the same region;
/// rows = test space dofs.
SpMat mixed_mass(const FunctionSpace& test, const FunctionSpace& trial);

/// Number of Gauss points per direction used by all assemblers.
int default_quadrature_points();
/// Smallest collapsed-Gauss point count exact for polynomials of total `degree` on a `dim`-simplex.
int quadrature_points_for(int dim, int degree);

/// Nodal field evaluation helpers inside one cell of its space.
struct LocalEval {
  Eigen::VectorXd phi;
  Eigen::MatrixXd dphi;
};
void eval_local(int dim, int degree, const Eigen::Vector4d& lam, const Eigen::MatrixXd& grad_lam, LocalEval& out);

/// Values (ncomp) of a field at barycentric point lam of space element e.
Eigen::VectorXd field_value(const FieldSnapshot& f, int e, const LocalEval& ev);
/// Gradient rows = components, columns = directions.
Eigen::MatrixXd field_gradient(const FieldSnapshot& f, int e, const LocalEval& ev);

/// Gradient of a volume field inside mesh cell `cell` at barycentric point
/// `lam` of that cell (one-sided evaluation on boundary facets).
Eigen::MatrixXd gradient_in_cell(const FieldSnapshot& f, int cell, const Eigen::Vector4d& lam);
/// Value of a volume field inside mesh cell `cell`.
Eigen::VectorXd value_in_cell(const FieldSnapshot& f, int cell, const Eigen::Vector4d& lam);

}  // namespace fsi
