#pragma once

#include <vector>

#include <Eigen/Core>

namespace fsi {

/// Quadrature on a d-simplex (d = 1, 2, 3). Points are barycentric
/// coordinates (d+1 entries each); weights sum to one so the physical weight
/// is weight * simplex measure.
struct QuadratureRule {
  int dim = 0;
  std::vector<Eigen::Vector4d> barycentric;
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

/// Collapsed (Duffy) tensor Gauss rule with n points per direction; exact for
/// polynomials of total degree 2n - 1 - (d - 1) or better.
const QuadratureRule& simplex_rule(int dim, int n);

/// Shape functions of P1/P2 Lagrange elements in barycentric form. Local
/// ordering: vertices, then edges as in ReferenceMesh::local_edges.
namespace shape {

int num_local(int dim, int degree);

/// Values at barycentric point `lam`.
void values(int dim, int degree, const Eigen::Vector4d& lam, Eigen::VectorXd& out);

/// Physical gradients (rows = local functions) given the physical gradients
/// of the barycentric coordinates (column i = grad lambda_i).
void gradients(int dim, int degree, const Eigen::Vector4d& lam, const Eigen::MatrixXd& grad_lam,
               Eigen::MatrixXd& out);

/// Physical Hessians, each d x d, stacked as out[a]. Zero for P1.
void hessians(int dim, int degree, const Eigen::MatrixXd& grad_lam, std::vector<Eigen::MatrixXd>& out);

/// Barycentric coordinates of the local nodes of the reference element.
const std::vector<Eigen::Vector4d>& node_barycentric(int dim, int degree);

}  // namespace shape
}  // namespace fsi
