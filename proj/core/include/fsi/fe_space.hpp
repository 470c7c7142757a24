#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fsi/mesh.hpp"

namespace fsi {

enum class FieldRegion { Solid, Fluid, Boundary };

/// Scalar Lagrange space on a region (the cells of one region) or on a tagged
/// boundary (the facets of one tag). Dofs are a region-local numbering of the
/// mesh's global P1/P2 nodes, so nodes on GammaL are shared by the solid,
/// fluid and boundary spaces.
class FunctionSpace {
 public:
  static std::shared_ptr<const FunctionSpace> volume(MeshPtr mesh, Region region, int degree);
  static std::shared_ptr<const FunctionSpace> boundary(MeshPtr mesh, BoundaryTag tag, int degree);

  const ReferenceMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int dim() const { return mesh_->dim(); }
  int degree() const { return degree_; }
  FieldRegion region() const { return region_; }
  bool is_boundary() const { return region_ == FieldRegion::Boundary; }
  Region volume_region() const;
  BoundaryTag boundary_tag() const;

  int num_dofs() const { return static_cast<int>(dof_node_.size()); }
  int node(int dof) const { return dof_node_[dof]; }
  /// dof carrying a global node, or -1.
  int dof_of_node(int node) const { return node_dof_[node]; }
  SmallVec dof_coord(int dof) const { return mesh_->node_coord(dof_node_[dof]); }

  /// Mesh cell ids (volume) or facet indices into mesh().facets() (boundary).
  const std::vector<int>& elements() const { return elements_; }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  /// Local-to-dof map of element e (index into elements()).
  const std::vector<int>& element_dofs(int e) const { return element_dofs_[e]; }
  /// Element index of a mesh cell (volume) or facet (boundary), or -1.
  int element_of(int cell_or_facet) const;

  /// Dofs lying on facets carrying `tag`.
  std::vector<int> dofs_on(BoundaryTag tag) const;
  /// Dofs not on any tagged facet.
  std::vector<int> interior_dofs() const;

  bool same_layout(const FunctionSpace& other) const;

 private:
  FunctionSpace() = default;
  void finish();

  MeshPtr mesh_;
  int degree_ = 1;
  FieldRegion region_ = FieldRegion::Solid;
  std::optional<BoundaryTag> tag_;
  std::vector<int> elements_;
  std::vector<std::vector<int>> element_nodes_;
  std::vector<std::vector<int>> element_dofs_;
  std::vector<int> dof_node_;
  std::vector<int> node_dof_;
  std::vector<int> entity_element_;
};

using SpacePtr = std::shared_ptr<const FunctionSpace>;

}  // namespace fsi
