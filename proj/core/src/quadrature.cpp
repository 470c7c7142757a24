#include "fsi/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fsi/errors.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw ShapeError("Gauss rule needs at least one point");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[n - 1 - i] = 0.5 * (z + 1.0);
    w[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

namespace {

QuadratureRule make_rule(int dim, int n) {
  std::vector<double> x, w;
  gauss_legendre_01(n, x, w);
  QuadratureRule r;
  r.dim = dim;
  double fact = dim == 1 ? 1.0 : (dim == 2 ? 2.0 : 6.0);
  for (int a = 0; a < n; ++a) {
    if (dim == 1) {
      r.barycentric.push_back(Eigen::Vector4d(1.0 - x[a], x[a], 0, 0));
      r.weights.push_back(w[a]);
      continue;
    }
    for (int b = 0; b < n; ++b) {
      if (dim == 2) {
        double u = x[a], v = x[b] * (1.0 - x[a]);
        r.barycentric.push_back(Eigen::Vector4d(1.0 - u - v, u, v, 0));
        r.weights.push_back(fact * w[a] * w[b] * (1.0 - x[a]));
        continue;
      }
      for (int c = 0; c < n; ++c) {
        double u = x[a];
        double v = x[b] * (1.0 - x[a]);
        double s = x[c] * (1.0 - x[a]) * (1.0 - x[b]);
        r.barycentric.push_back(Eigen::Vector4d(1.0 - u - v - s, u, v, s));
        r.weights.push_back(fact * w[a] * w[b] * w[c] * (1.0 - x[a]) * (1.0 - x[a]) * (1.0 - x[b]));
      }
    }
  }
  return r;
}

}  // namespace

const QuadratureRule& simplex_rule(int dim, int n) {
  if (dim < 1 || dim > 3) throw ShapeError("simplex rules exist for dimensions 1..3");
  static std::mutex mtx;
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(dim, n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_rule(dim, n)).first;
  return it->second;
}

namespace shape {

int num_local(int dim, int degree) {
  if (degree == 1) return dim + 1;
  if (degree == 2) return dim == 2 ? 6 : (dim == 3 ? 10 : 3);
  throw ShapeError("only P1 and P2 elements are available");
}

void values(int dim, int degree, const Eigen::Vector4d& lam, Eigen::VectorXd& out) {
  const int nv = dim + 1;
  out.resize(num_local(dim, degree));
  if (degree == 1) {
    for (int i = 0; i < nv; ++i) out(i) = lam(i);
    return;
  }
  for (int i = 0; i < nv; ++i) out(i) = lam(i) * (2.0 * lam(i) - 1.0);
  const auto& le = ReferenceMesh::local_edges(dim == 1 ? 2 : dim);
  const int ne = dim == 1 ? 1 : static_cast<int>(le.size());
  for (int k = 0; k < ne; ++k) out(nv + k) = 4.0 * lam(le[k][0]) * lam(le[k][1]);
}

void gradients(int dim, int degree, const Eigen::Vector4d& lam, const Eigen::MatrixXd& grad_lam,
               Eigen::MatrixXd& out) {
  const int nv = dim + 1;
  const int d = static_cast<int>(grad_lam.rows());
  out.resize(num_local(dim, degree), d);
  if (degree == 1) {
    for (int i = 0; i < nv; ++i) out.row(i) = grad_lam.col(i).transpose();
    return;
  }
  for (int i = 0; i < nv; ++i) out.row(i) = (4.0 * lam(i) - 1.0) * grad_lam.col(i).transpose();
  const auto& le = ReferenceMesh::local_edges(dim == 1 ? 2 : dim);
  const int ne = dim == 1 ? 1 : static_cast<int>(le.size());
  for (int k = 0; k < ne; ++k) {
    int i = le[k][0], j = le[k][1];
    out.row(nv + k) = 4.0 * (lam(j) * grad_lam.col(i) + lam(i) * grad_lam.col(j)).transpose();
  }
}

void hessians(int dim, int degree, const Eigen::MatrixXd& grad_lam, std::vector<Eigen::MatrixXd>& out) {
  const int nv = dim + 1;
  const int d = static_cast<int>(grad_lam.rows());
  const int nl = num_local(dim, degree);
  out.assign(nl, Eigen::MatrixXd::Zero(d, d));
  if (degree == 1) return;
  for (int i = 0; i < nv; ++i) out[i] = 4.0 * grad_lam.col(i) * grad_lam.col(i).transpose();
  const auto& le = ReferenceMesh::local_edges(dim == 1 ? 2 : dim);
  const int ne = dim == 1 ? 1 : static_cast<int>(le.size());
  for (int k = 0; k < ne; ++k) {
    int i = le[k][0], j = le[k][1];
    out[nv + k] = 4.0 * (grad_lam.col(i) * grad_lam.col(j).transpose() +
                         grad_lam.col(j) * grad_lam.col(i).transpose());
  }
}

const std::vector<Eigen::Vector4d>& node_barycentric(int dim, int degree) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::vector<Eigen::Vector4d>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Eigen::Vector4d> pts;
  for (int i = 0; i <= dim; ++i) {
    Eigen::Vector4d l = Eigen::Vector4d::Zero();
    l(i) = 1.0;
    pts.push_back(l);
  }
  if (degree == 2) {
    const auto& le = ReferenceMesh::local_edges(dim == 1 ? 2 : dim);
    const int ne = dim == 1 ? 1 : static_cast<int>(le.size());
    for (int k = 0; k < ne; ++k) {
      Eigen::Vector4d l = Eigen::Vector4d::Zero();
      l(le[k][0]) = 0.5;
      l(le[k][1]) = 0.5;
      pts.push_back(l);
    }
  }
  return cache.emplace(key, pts).first->second;
}

}  // namespace shape
}  // namespace fsi
