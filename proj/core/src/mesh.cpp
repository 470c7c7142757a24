#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "fsi/errors.hpp"

namespace fsi {

const char* to_string(Region r) { return r == Region::Solid ? "solid" : "fluid"; }
const char* to_string(BoundaryTag t) { return t == BoundaryTag::GammaB ? "gamma_B" : "gamma_L"; }

GeometrySpec::Family GeometrySpec::parse_family(const std::string& name) {
  if (name == "annulus") return Family::Annulus;
  if (name == "shell") return Family::Shell;
  if (name == "strip") return Family::Strip;
  throw ConfigError("unknown geometry family '" + name + "'");
}

const std::vector<std::array<int, 2>>& ReferenceMesh::local_edges(int dim) {
  static const std::vector<std::array<int, 2>> e2{{0, 1}, {0, 2}, {1, 2}};
  static const std::vector<std::array<int, 2>> e3{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  return dim == 2 ? e2 : e3;
}

namespace {

double signed_volume(const Eigen::MatrixXd& X, const std::array<int, 4>& c, int dim) {
  Eigen::MatrixXd J(dim, dim);
  for (int k = 0; k < dim; ++k) J.col(k) = X.col(c[k + 1]) - X.col(c[0]);
  return J.determinant();
}

}  // namespace

ReferenceMesh::ReferenceMesh(int dim, Eigen::MatrixXd vertices, std::vector<std::array<int, 4>> cells,
                             std::vector<Region> regions)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cells)), regions_(std::move(regions)) {
  if (dim_ != 2 && dim_ != 3) throw MeshError("mesh dimension must be 2 or 3");
  if (vertices_.rows() != dim_) throw MeshError("vertex array has wrong number of rows");
  if (regions_.size() != cells_.size()) throw MeshError("one region tag per cell required");
  for (auto& c : cells_) {
    for (int k = 0; k <= dim_; ++k)
      if (c[k] < 0 || c[k] >= num_vertices()) throw MeshError("cell references a missing vertex");
    double vol = signed_volume(vertices_, c, dim_);
    if (std::abs(vol) < 1e-300) throw MeshError("degenerate cell");
    if (vol < 0) std::swap(c[0], c[1]);
  }
  build_topology();
}

void ReferenceMesh::build_topology() {
  const int nv = num_vertices();
  vertex_edges_.assign(nv, {});
  edges_.clear();
  cell_edges_.assign(cells_.size(), std::array<int, 6>{-1, -1, -1, -1, -1, -1});
  const auto& le = local_edges(dim_);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (std::size_t k = 0; k < le.size(); ++k) {
      int a = cells_[c][le[k][0]], b = cells_[c][le[k][1]];
      int e = find_edge(a, b);
      if (e < 0) {
        e = static_cast<int>(edges_.size());
        edges_.push_back({std::min(a, b), std::max(a, b)});
        vertex_edges_[std::min(a, b)].push_back({std::max(a, b), e});
      }
      cell_edges_[c][k] = e;
    }
  }

  // Facets are keyed by their sorted vertex tuple; a facet belongs to the
  // boundary data when it has one neighbour or neighbours of different regions.
  std::map<std::array<int, 3>, std::vector<std::pair<int, int>>> facet_cells;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int opp = 0; opp <= dim_; ++opp) {
      std::array<int, 3> key{-1, -1, -1};
      int n = 0;
      for (int k = 0; k <= dim_; ++k)
        if (k != opp) key[n++] = cells_[c][k];
      std::sort(key.begin(), key.begin() + dim_);
      facet_cells[key].push_back({static_cast<int>(c), opp});
    }
  }
  facets_.clear();
  for (const auto& [key, adj] : facet_cells) {
    if (adj.size() > 2) throw MeshError("non-manifold facet");
    BoundaryFacet f;
    f.vertices = key;
    int ref_cell = -1, ref_opp = -1;
    if (adj.size() == 1) {
      if (regions_[adj[0].first] != Region::Solid) continue;  // bare fluid boundary is not supported
      f.tag = BoundaryTag::GammaB;
      f.solid_cell = adj[0].first;
      ref_cell = adj[0].first;
      ref_opp = adj[0].second;
    } else {
      Region r0 = regions_[adj[0].first], r1 = regions_[adj[1].first];
      if (r0 == r1) continue;
      f.tag = BoundaryTag::GammaL;
      const auto& fl = r0 == Region::Fluid ? adj[0] : adj[1];
      const auto& so = r0 == Region::Fluid ? adj[1] : adj[0];
      f.fluid_cell = fl.first;
      f.solid_cell = so.first;
      ref_cell = fl.first;
      ref_opp = fl.second;
    }
    SmallVec p0 = vertex(key[0]);
    SmallVec n(dim_);
    if (dim_ == 2) {
      SmallVec t = vertex(key[1]) - p0;
      n << t(1), -t(0);
      f.measure = t.norm();
    } else {
      Eigen::Vector3d a = vertex(key[1]) - p0, b = vertex(key[2]) - p0;
      Eigen::Vector3d c = a.cross(b);
      n = c;
      f.measure = 0.5 * c.norm();
    }
    n.normalize();
    SmallVec inward = vertex(cells_[ref_cell][ref_opp]) - p0;
    if (n.dot(inward) > 0) n = -n;
    f.normal = n;
    facets_.push_back(f);
  }
}

int ReferenceMesh::find_edge(int a, int b) const {
  int lo = std::min(a, b), hi = std::max(a, b);
  for (const auto& [other, e] : vertex_edges_[lo])
    if (other == hi) return e;
  return -1;
}

SmallVec ReferenceMesh::node_coord(int node) const {
  if (node < num_vertices()) return vertex(node);
  const auto& e = edges_[node - num_vertices()];
  return 0.5 * (vertex(e[0]) + vertex(e[1]));
}

std::vector<int> ReferenceMesh::cell_nodes(int c, int degree) const {
  std::vector<int> out(cells_[c].begin(), cells_[c].begin() + dim_ + 1);
  if (degree == 2)
    for (int k = 0; k < edges_per_cell(); ++k) out.push_back(num_vertices() + cell_edges_[c][k]);
  return out;
}

std::vector<int> ReferenceMesh::facet_nodes(const BoundaryFacet& f, int degree) const {
  std::vector<int> out(f.vertices.begin(), f.vertices.begin() + dim_);
  if (degree == 2) {
    const auto& le = local_edges(2);  // edges of a triangular facet
    if (dim_ == 2) {
      out.push_back(num_vertices() + find_edge(f.vertices[0], f.vertices[1]));
    } else {
      for (int k = 0; k < 3; ++k)
        out.push_back(num_vertices() + find_edge(f.vertices[le[k][0]], f.vertices[le[k][1]]));
    }
  }
  return out;
}

double ReferenceMesh::cell_volume(int c) const {
  double v = std::abs(signed_volume(vertices_, cells_[c], dim_));
  return dim_ == 2 ? v / 2.0 : v / 6.0;
}

double ReferenceMesh::region_measure(Region r) const {
  double s = 0.0;
  for (int c = 0; c < num_cells(); ++c)
    if (regions_[c] == r) s += cell_volume(c);
  return s;
}

double ReferenceMesh::boundary_measure(BoundaryTag t) const {
  double s = 0.0;
  for (const auto& f : facets_)
    if (f.tag == t) s += f.measure;
  return s;
}

int ReferenceMesh::count_cells(Region r) const {
  return static_cast<int>(std::count(regions_.begin(), regions_.end(), r));
}

std::pair<double, double> ReferenceMesh::edge_length_range() const {
  double lo = 1e300, hi = 0.0;
  for (const auto& e : edges_) {
    double l = (vertex(e[0]) - vertex(e[1])).norm();
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  return {lo, hi};
}

namespace {

// Concentric rings: ring k of the fluid disk has 6k nodes, neighbouring rings
// are stitched by merging their angular sequences.
MeshPtr build_annulus(const GeometrySpec& g) {
  const int nf = std::max(1, static_cast<int>(std::lround(g.r_inner / g.h)));
  const double hr = g.r_inner / nf;
  const int ns = std::max(1, static_cast<int>(std::lround((g.r_outer - g.r_inner) / hr)));
  const int nrings = nf + ns;
  std::vector<int> ring_start(nrings + 2, 0);
  std::vector<int> ring_size(nrings + 1);
  std::vector<std::array<double, 2>> pts;
  for (int k = 0; k <= nrings; ++k) {
    ring_size[k] = k == 0 ? 1 : 6 * k;
    ring_start[k] = static_cast<int>(pts.size());
    double r = k <= nf ? k * hr : g.r_inner + (k - nf) * (g.r_outer - g.r_inner) / ns;
    for (int j = 0; j < ring_size[k]; ++j) {
      double th = 2.0 * std::numbers::pi * j / ring_size[k];
      pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  std::vector<std::array<int, 4>> cells;
  std::vector<Region> regions;
  for (int k = 0; k < nrings; ++k) {
    const Region reg = k + 1 <= nf ? Region::Fluid : Region::Solid;
    const int na = ring_size[k], nb = ring_size[k + 1];
    auto A = [&](int i) { return ring_start[k] + (na == 1 ? 0 : i % na); };
    auto B = [&](int j) { return ring_start[k + 1] + j % nb; };
    if (na == 1) {
      for (int j = 0; j < nb; ++j) {
        cells.push_back({A(0), B(j), B(j + 1), -1});
        regions.push_back(reg);
      }
      continue;
    }
    int i = 0, j = 0;
    while (i < na || j < nb) {
      double ai = static_cast<double>(i + 1) / na, bj = static_cast<double>(j + 1) / nb;
      bool advance_inner = j >= nb || (i < na && ai < bj - 1e-12);
      if (advance_inner) {
        cells.push_back({A(i), A(i + 1), B(j), -1});
        ++i;
      } else {
        cells.push_back({A(i), B(j + 1), B(j), -1});
        ++j;
      }
      regions.push_back(reg);
    }
  }
  Eigen::MatrixXd X(2, pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) X.col(p) << pts[p][0], pts[p][1];
  return std::make_shared<ReferenceMesh>(2, std::move(X), std::move(cells), std::move(regions));
}

// Structured cube grid split into Kuhn tetrahedra and mapped onto a ball
// surrounded by a shell. Grid points with |p|_inf <= nf form the fluid ball.
MeshPtr build_shell(const GeometrySpec& g) {
  const int nf = std::max(1, static_cast<int>(std::lround(g.r_inner / g.h)));
  const double hr = g.r_inner / nf;
  const int ns = std::max(1, static_cast<int>(std::lround((g.r_outer - g.r_inner) / hr)));
  const int n = nf + ns;
  const int w = 2 * n + 1;
  auto id = [&](int i, int j, int k) { return ((i + n) * w + (j + n)) * w + (k + n); };
  Eigen::MatrixXd X(3, w * w * w);
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k) {
        Eigen::Vector3d p(i, j, k);
        double s = p.lpNorm<Eigen::Infinity>();
        Eigen::Vector3d x = Eigen::Vector3d::Zero();
        if (s > 0) {
          Eigen::Vector3d dir = p / p.norm();
          if (s <= nf) {
            double wgt = s / nf;
            x = (g.r_inner / nf) * ((1.0 - wgt) * p + wgt * s * dir);
          } else {
            x = (g.r_inner + (s - nf) * (g.r_outer - g.r_inner) / ns) * dir;
          }
        }
        X.col(id(i, j, k)) = x;
      }
  std::vector<std::array<int, 4>> cells;
  std::vector<Region> regions;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int i = -n; i < n; ++i)
    for (int j = -n; j < n; ++j)
      for (int k = -n; k < n; ++k) {
        bool fluid = std::max({std::abs(i), std::abs(i + 1), std::abs(j), std::abs(j + 1), std::abs(k),
                               std::abs(k + 1)}) <= nf;
        for (const auto& pm : perms) {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> tet{};
          tet[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            c[pm[s]] += 1;
            tet[s + 1] = id(c[0], c[1], c[2]);
          }
          cells.push_back(tet);
          regions.push_back(fluid ? Region::Fluid : Region::Solid);
        }
      }
  (void)hr;
  return std::make_shared<ReferenceMesh>(3, std::move(X), std::move(cells), std::move(regions));
}

MeshPtr build_strip(const GeometrySpec& g) {
  const int nx = std::max(1, static_cast<int>(std::lround(g.length / g.h)));
  const int ny = std::max(1, static_cast<int>(std::lround(g.height / g.h)));
  Eigen::MatrixXd X(2, (nx + 1) * (ny + 1));
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      X.col(id(i, j)) << g.length * i / nx, -0.5 * g.height + g.height * j / ny;
  std::vector<std::array<int, 4>> cells;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // alternate diagonals to avoid a preferred direction
      if ((i + j) % 2 == 0) {
        cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), -1});
        cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1), -1});
      } else {
        cells.push_back({id(i, j), id(i + 1, j), id(i, j + 1), -1});
        cells.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1), -1});
      }
    }
  std::vector<Region> regions(cells.size(), Region::Solid);
  return std::make_shared<ReferenceMesh>(2, std::move(X), std::move(cells), std::move(regions));
}

}  // namespace

MeshPtr build_reference_mesh(const GeometrySpec& g) {
  if (!(g.h > 0) || !std::isfinite(g.h)) throw MeshError("mesh size h must be positive");
  switch (g.family) {
    case GeometrySpec::Family::Annulus:
    case GeometrySpec::Family::Shell:
      if (!(g.r_inner > 0) || !(g.r_inner < g.r_outer))
        throw MeshError("geometry requires 0 < r_inner < r_outer");
      if (g.h > g.r_inner) throw MeshError("mesh size exceeds the fluid radius");
      return g.family == GeometrySpec::Family::Annulus ? build_annulus(g) : build_shell(g);
    case GeometrySpec::Family::Strip:
      if (!(g.length > 0) || !(g.height > 0)) throw MeshError("strip requires positive extents");
      return build_strip(g);
  }
  throw MeshError("unknown geometry family");
}

bool has_tag(const ReferenceMesh& m, BoundaryTag t) {
  for (const auto& f : m.facets())
    if (f.tag == t) return true;
  return false;
}

}  // namespace fsi
