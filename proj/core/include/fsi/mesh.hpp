#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsi/tensor.hpp"

namespace fsi {

enum class Region : std::uint8_t { Solid = 0, Fluid = 1 };
enum class BoundaryTag : std::uint8_t { GammaB = 0, GammaL = 1 };

const char* to_string(Region r);
const char* to_string(BoundaryTag t);

/// Built-in reference geometries.
///  - Annulus (d = 2): fluid disk of radius r_inner inside an elastic ring r_inner..r_outer.
///  - Shell (d = 3): fluid ball of radius r_inner inside a spherical shell up to r_outer.
///  - Strip (d = 2): solid-only rectangle [0, length] x [-height/2, height/2]; every
///    boundary facet is traction free. Used for wave-propagation and norm checks.
struct GeometrySpec {
  enum class Family { Annulus, Shell, Strip };
  Family family = Family::Annulus;
  double r_inner = 1.0;
  double r_outer = 2.0;
  double h = 0.25;
  double length = 2.0;
  double height = 2.0;

  int dim() const { return family == Family::Shell ? 3 : 2; }
  static Family parse_family(const std::string& name);
};

/// A tagged boundary facet. For GammaL the facet separates `fluid_cell` and
/// `solid_cell`; for GammaB `solid_cell` is the only neighbour and
/// `fluid_cell` is -1. The normal points out of the fluid on GammaL and out of
/// the solid on GammaB.
struct BoundaryFacet {
  std::array<int, 3> vertices{-1, -1, -1};
  BoundaryTag tag = BoundaryTag::GammaB;
  int solid_cell = -1;
  int fluid_cell = -1;
  SmallVec normal;
  double measure = 0.0;
};

/// Conforming simplicial mesh of the reference configuration. Vertex
/// coordinates are stored column-wise. Edges are numbered so that P2 nodes are
/// vertices followed by edge midpoints.
class ReferenceMesh {
 public:
  ReferenceMesh(int dim, Eigen::MatrixXd vertices, std::vector<std::array<int, 4>> cells,
                std::vector<Region> regions);

  int dim() const { return dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.cols()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int vertices_per_cell() const { return dim_ + 1; }
  int edges_per_cell() const { return dim_ == 2 ? 3 : 6; }
  int num_nodes(int degree) const { return degree == 1 ? num_vertices() : num_vertices() + num_edges(); }

  const Eigen::MatrixXd& vertices() const { return vertices_; }
  SmallVec vertex(int v) const { return vertices_.col(v); }
  const std::array<int, 4>& cell(int c) const { return cells_[c]; }
  Region region(int c) const { return regions_[c]; }
  const std::array<int, 6>& cell_edges(int c) const { return cell_edges_[c]; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  const std::vector<BoundaryFacet>& facets() const { return facets_; }

  /// Coordinates of a P1/P2 node (vertex or edge midpoint).
  SmallVec node_coord(int node) const;
  /// Global node ids of a cell for degree 1 or 2, in local order
  /// (vertices, then edges (0,1),(0,2),(1,2) in 2D or (0,1),(0,2),(0,3),(1,2),(1,3),(2,3) in 3D).
  std::vector<int> cell_nodes(int c, int degree) const;
  /// Global node ids of a facet for degree 1 or 2 (vertices, then facet edges).
  std::vector<int> facet_nodes(const BoundaryFacet& f, int degree) const;
  /// Edge id joining two vertices, or -1.
  int find_edge(int a, int b) const;

  double cell_volume(int c) const;
  double region_measure(Region r) const;
  double boundary_measure(BoundaryTag t) const;
  int count_cells(Region r) const;
  /// Smallest and largest edge length.
  std::pair<double, double> edge_length_range() const;

  /// Local edge table of the reference simplex.
  static const std::vector<std::array<int, 2>>& local_edges(int dim);

 private:
  void build_topology();

  int dim_;
  Eigen::MatrixXd vertices_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<Region> regions_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 6>> cell_edges_;
  std::vector<BoundaryFacet> facets_;
  std::vector<std::vector<std::pair<int, int>>> vertex_edges_;
};

using MeshPtr = std::shared_ptr<const ReferenceMesh>;

/// Builds one of the built-in geometry families. Throws MeshError for
/// r_inner >= r_outer or non-positive h.
MeshPtr build_reference_mesh(const GeometrySpec& geometry);

/// Plain-text mesh format:
///   fsi-mesh 1
///   dim <d>
///   vertices <n>      followed by n lines of d coordinates
///   cells <m>         followed by m lines "<solid|fluid> v0 .. vd"
/// Boundary facets and tags are rebuilt from cell regions on load.
void write_mesh(std::ostream& os, const ReferenceMesh& mesh);
MeshPtr read_mesh(std::istream& is);

/// True when at least one boundary facet carries `tag`.
bool has_tag(const ReferenceMesh& mesh, BoundaryTag tag);

}  // namespace fsi
