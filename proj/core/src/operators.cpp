#include "fsi/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

#include <Eigen/Dense>

#include "fsi/errors.hpp"

namespace fsi {

namespace {

int num_cubic(int d) { return d == 2 ? 10 : 20; }

// Monomials of total degree <= 3 in (y_0, ..., y_{d-1}); the linear terms come
// right after the constant.
void cubic_basis(const SmallVec& y, Eigen::RowVectorXd& row) {
  const int d = static_cast<int>(y.size());
  row.resize(num_cubic(d));
  int k = 0;
  row(k++) = 1.0;
  for (int i = 0; i < d; ++i) row(k++) = y(i);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) row(k++) = y(i) * y(j);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int l = j; l < d; ++l) row(k++) = y(i) * y(j) * y(l);
}

}  // namespace

NodalGradient::NodalGradient(SpacePtr space) : space_(std::move(space)) {
  if (space_->is_boundary()) throw ShapeError("nodal gradient requires a volume space");
  const int d = space_->dim();
  const int n = space_->num_dofs();
  const int nc = num_cubic(d);
  std::vector<std::vector<int>> dof_elems(n);
  for (int e = 0; e < space_->num_elements(); ++e)
    for (int a : space_->element_dofs(e)) dof_elems[a].push_back(e);

  std::array<Triplets, 3> trip;
  Eigen::RowVectorXd row;
  for (int i = 0; i < n; ++i) {
    std::set<int> patch{i};
    std::set<int> frontier{i};
    Eigen::MatrixXd coef;
    std::vector<int> pts;
    SmallVec xi = space_->dof_coord(i);
    double scale = 1.0;
    for (int ring = 0; ring < 8; ++ring) {
      std::set<int> next;
      for (int a : frontier)
        for (int e : dof_elems[a])
          for (int b : space_->element_dofs(e))
            if (!patch.count(b)) next.insert(b);
      patch.insert(next.begin(), next.end());
      frontier = std::move(next);
      if (static_cast<int>(patch.size()) < 2 * nc) continue;
      pts.assign(patch.begin(), patch.end());
      scale = 0.0;
      for (int p : pts) scale = std::max(scale, (space_->dof_coord(p) - xi).norm());
      Eigen::MatrixXd V(pts.size(), nc);
      for (std::size_t r = 0; r < pts.size(); ++r) {
        cubic_basis((space_->dof_coord(pts[r]) - xi) / scale, row);
        V.row(r) = row;
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
      if (qr.rank() < nc) continue;
      // rows of pinv(V) that pick the linear coefficients
      Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(pts.size(), pts.size()));
      coef = pinv.middleRows(1, d) / scale;
      break;
    }
    if (coef.size() == 0) throw MeshError("nodal gradient patch is rank deficient");
    for (int k = 0; k < d; ++k)
      for (std::size_t r = 0; r < pts.size(); ++r)
        if (coef(k, r) != 0.0) trip[k].emplace_back(i, pts[r], coef(k, r));
  }
  for (int k = 0; k < d; ++k) {
    G_[k].resize(n, n);
    G_[k].setFromTriplets(trip[k].begin(), trip[k].end());
  }
}

std::shared_ptr<const NodalGradient> NodalGradient::of(const SpacePtr& space) {
  static std::mutex mtx;
  static std::map<const FunctionSpace*, std::pair<std::weak_ptr<const FunctionSpace>, std::shared_ptr<const NodalGradient>>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(space.get());
  if (it != cache.end() && it->second.first.lock() == space) return it->second.second;
  auto g = std::make_shared<const NodalGradient>(space);
  cache[space.get()] = {space, g};
  return g;
}

FieldSnapshot NodalGradient::scalar_gradient(const FieldSnapshot& f) const {
  if (!f.space->same_layout(*space_) || f.components != 1) throw ShapeError("scalar_gradient: field mismatch");
  const int d = space_->dim();
  FieldSnapshot out(space_, d, f.time);
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd g = G_[k] * f.values;
    for (int i = 0; i < out.num_dofs(); ++i) out.at(i, k) = g(i);
  }
  return out;
}

FieldSnapshot NodalGradient::vector_gradient(const FieldSnapshot& f) const {
  const int d = space_->dim();
  if (!f.space->same_layout(*space_) || f.components != d) throw ShapeError("vector_gradient: field mismatch");
  FieldSnapshot out(space_, d * d, f.time);
  for (int c = 0; c < d; ++c) {
    Eigen::VectorXd fc = f.component(c);
    for (int k = 0; k < d; ++k) {
      Eigen::VectorXd g = G_[k] * fc;
      for (int i = 0; i < out.num_dofs(); ++i) out.at(i, c * d + k) = g(i);
    }
  }
  return out;
}

FieldSnapshot NodalGradient::tensor_divergence(const FieldSnapshot& A) const {
  const int d = space_->dim();
  if (!A.space->same_layout(*space_) || A.components != d * d) throw ShapeError("tensor_divergence: field mismatch");
  FieldSnapshot out(space_, d, A.time);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k) {
      Eigen::VectorXd g = G_[k] * A.component(r * d + k);
      for (int i = 0; i < out.num_dofs(); ++i) out.at(i, r) += g(i);
    }
  return out;
}

FieldSnapshot NodalGradient::vector_divergence(const FieldSnapshot& v) const {
  const int d = space_->dim();
  if (!v.space->same_layout(*space_) || v.components != d) throw ShapeError("vector_divergence: field mismatch");
  FieldSnapshot out(space_, 1, v.time);
  for (int k = 0; k < d; ++k) out.values += G_[k] * v.component(k);
  return out;
}

NormKind parse_norm_kind(const std::string& s) {
  if (s == "L2") return NormKind::L2;
  if (s == "H1") return NormKind::H1;
  if (s == "H2") return NormKind::H2;
  if (s == "H2seminorm") return NormKind::H2Seminorm;
  throw ConfigError("unknown norm kind '" + s + "'");
}

const NormMatrices& norm_matrices(const SpacePtr& s) {
  static std::mutex mtx;
  static std::map<const FunctionSpace*, std::pair<std::weak_ptr<const FunctionSpace>, std::shared_ptr<NormMatrices>>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(s.get());
  if (it != cache.end() && it->second.first.lock() == s) return *it->second.second;
  auto nm = std::make_shared<NormMatrices>();
  nm->mass = mass_matrix(*s);
  if (!s->is_boundary()) {
    nm->grad = gradient_gram(*s);
    nm->hess = hessian_gram(*s);
  }
  cache[s.get()] = {s, nm};
  return *nm;
}

namespace {

double quad_form(const SpMat& m, const FieldSnapshot& f) {
  double s = 0.0;
  for (int c = 0; c < f.components; ++c) {
    Eigen::VectorXd x = f.component(c);
    s += x.dot(m * x);
  }
  return std::max(s, 0.0);
}

}  // namespace

double discrete_norm(const FieldSnapshot& f, NormKind kind) {
  if (!f.space) throw ShapeError("field has no space");
  const auto& nm = norm_matrices(f.space);
  if (f.space->is_boundary() && kind != NormKind::L2) throw ShapeError("boundary fields support the L2 norm only");
  if ((kind == NormKind::H2 || kind == NormKind::H2Seminorm) && f.space->degree() < 2)
    throw ShapeError("H2 norms need at least P2 fields");
  switch (kind) {
    case NormKind::L2:
      return std::sqrt(quad_form(nm.mass, f));
    case NormKind::H1:
      return std::sqrt(quad_form(nm.mass, f) + quad_form(nm.grad, f));
    case NormKind::H2:
      return std::sqrt(quad_form(nm.mass, f) + quad_form(nm.grad, f) + quad_form(nm.hess, f));
    case NormKind::H2Seminorm:
      return std::sqrt(quad_form(nm.hess, f));
  }
  return 0.0;
}

double fractional_norm_estimate(const FieldSnapshot& f, double s) {
  if (!(s >= 0.0 && s <= 2.0)) throw ShapeError("fractional order must lie in [0, 2]");
  int k = std::min(static_cast<int>(std::floor(s)), 1);
  double theta = s - k;
  const NormKind lo = k == 0 ? NormKind::L2 : NormKind::H1;
  const NormKind hi = k == 0 ? NormKind::H1 : NormKind::H2;
  double a = discrete_norm(f, lo);
  if (theta == 0.0) return a;
  double b = discrete_norm(f, hi);
  if (a == 0.0 || b == 0.0) return 0.0;
  return std::pow(a, 1.0 - theta) * std::pow(b, theta);
}

namespace {

std::map<std::tuple<const ReferenceMesh*, int, int>, std::pair<std::weak_ptr<const ReferenceMesh>, SpacePtr>>& bcache() {
  static std::map<std::tuple<const ReferenceMesh*, int, int>, std::pair<std::weak_ptr<const ReferenceMesh>, SpacePtr>> c;
  return c;
}

}  // namespace

SpacePtr boundary_space(const MeshPtr& mesh, BoundaryTag tag, int degree) {
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(mesh.get(), static_cast<int>(tag), degree);
  auto& c = bcache();
  auto it = c.find(key);
  if (it != c.end() && it->second.first.lock() == mesh) return it->second.second;
  SpacePtr s = FunctionSpace::boundary(mesh, tag, degree);
  c[key] = {mesh, s};
  return s;
}

FieldSnapshot trace_extract(const FieldSnapshot& f, BoundaryTag tag) {
  if (f.space->is_boundary()) throw ShapeError("trace of a boundary field");
  Region r = f.space->volume_region();
  if (tag == BoundaryTag::GammaB && r == Region::Fluid) throw ShapeError("gamma_B does not touch the fluid region");
  SpacePtr bs = boundary_space(f.space->mesh_ptr(), tag, f.space->degree());
  return restrict_to(f, bs);
}

Trajectory trace_extract(const Trajectory& tr, BoundaryTag tag) {
  Trajectory out;
  out.t0 = tr.t0;
  out.dt = tr.dt;
  for (const auto& l : tr.levels) out.levels.push_back(trace_extract(l, tag));
  return out;
}

FieldSnapshot nodal_normals(const SpacePtr& bs) {
  if (!bs->is_boundary()) throw ShapeError("nodal normals need a boundary space");
  const int d = bs->dim();
  FieldSnapshot out(bs, d, 0.0);
  for (int e = 0; e < bs->num_elements(); ++e) {
    const auto& f = bs->mesh().facets()[bs->elements()[e]];
    for (int a : bs->element_dofs(e)) out.values.segment(a * d, d) += f.measure * f.normal;
  }
  for (int a = 0; a < bs->num_dofs(); ++a) {
    double n = out.values.segment(a * d, d).norm();
    if (n > 0) out.values.segment(a * d, d) /= n;
  }
  return out;
}

double time_l2(const Trajectory& tr, NormKind kind) {
  const int n = tr.num_levels();
  if (n == 0) return 0.0;
  if (n == 1) return 0.0;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    double v = discrete_norm(tr[k], kind);
    s += w * tr.dt * v * v;
  }
  return std::sqrt(s);
}

double time_max(const Trajectory& tr, NormKind kind) {
  double m = 0.0;
  for (const auto& l : tr.levels) m = std::max(m, discrete_norm(l, kind));
  return m;
}

}  // namespace fsi
