#include "fsi/fe_space.hpp"

#include <algorithm>
#include <set>

#include "fsi/errors.hpp"

namespace fsi {

SpacePtr FunctionSpace::volume(MeshPtr mesh, Region region, int degree) {
  if (degree != 1 && degree != 2) throw ShapeError("space degree must be 1 or 2");
  std::shared_ptr<FunctionSpace> s(new FunctionSpace());
  s->mesh_ = std::move(mesh);
  s->degree_ = degree;
  s->region_ = region == Region::Solid ? FieldRegion::Solid : FieldRegion::Fluid;
  for (int c = 0; c < s->mesh_->num_cells(); ++c)
    if (s->mesh_->region(c) == region) {
      s->elements_.push_back(c);
      s->element_nodes_.push_back(s->mesh_->cell_nodes(c, degree));
    }
  if (s->elements_.empty()) throw MeshError(std::string("mesh has no ") + to_string(region) + " cells");
  s->finish();
  return s;
}

SpacePtr FunctionSpace::boundary(MeshPtr mesh, BoundaryTag tag, int degree) {
  if (degree != 1 && degree != 2) throw ShapeError("space degree must be 1 or 2");
  std::shared_ptr<FunctionSpace> s(new FunctionSpace());
  s->mesh_ = std::move(mesh);
  s->degree_ = degree;
  s->region_ = FieldRegion::Boundary;
  s->tag_ = tag;
  const auto& facets = s->mesh_->facets();
  for (std::size_t f = 0; f < facets.size(); ++f)
    if (facets[f].tag == tag) {
      s->elements_.push_back(static_cast<int>(f));
      s->element_nodes_.push_back(s->mesh_->facet_nodes(facets[f], degree));
    }
  if (s->elements_.empty()) throw MeshError(std::string("mesh has no ") + to_string(tag) + " facets");
  s->finish();
  return s;
}

void FunctionSpace::finish() {
  node_dof_.assign(mesh_->num_nodes(degree_), -1);
  std::set<int> nodes;
  for (const auto& en : element_nodes_) nodes.insert(en.begin(), en.end());
  dof_node_.assign(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < dof_node_.size(); ++i) node_dof_[dof_node_[i]] = static_cast<int>(i);
  int nent = region_ == FieldRegion::Boundary ? static_cast<int>(mesh_->facets().size()) : mesh_->num_cells();
  entity_element_.assign(nent, -1);
  for (std::size_t e = 0; e < elements_.size(); ++e) entity_element_[elements_[e]] = static_cast<int>(e);
  element_dofs_.clear();
  for (const auto& en : element_nodes_) {
    std::vector<int> ed(en.size());
    for (std::size_t k = 0; k < en.size(); ++k) ed[k] = node_dof_[en[k]];
    element_dofs_.push_back(std::move(ed));
  }
}

int FunctionSpace::element_of(int id) const {
  if (id < 0 || id >= static_cast<int>(entity_element_.size())) return -1;
  return entity_element_[id];
}

Region FunctionSpace::volume_region() const {
  if (is_boundary()) throw ShapeError("boundary space has no volume region");
  return region_ == FieldRegion::Solid ? Region::Solid : Region::Fluid;
}

BoundaryTag FunctionSpace::boundary_tag() const {
  if (!tag_) throw ShapeError("volume space has no boundary tag");
  return *tag_;
}

std::vector<int> FunctionSpace::dofs_on(BoundaryTag tag) const {
  std::set<int> out;
  for (const auto& f : mesh_->facets()) {
    if (f.tag != tag) continue;
    for (int n : mesh_->facet_nodes(f, degree_))
      if (node_dof_[n] >= 0) out.insert(node_dof_[n]);
  }
  return {out.begin(), out.end()};
}

std::vector<int> FunctionSpace::interior_dofs() const {
  std::vector<char> on(num_dofs(), 0);
  for (const auto& f : mesh_->facets())
    for (int n : mesh_->facet_nodes(f, degree_))
      if (node_dof_[n] >= 0) on[node_dof_[n]] = 1;
  std::vector<int> out;
  for (int i = 0; i < num_dofs(); ++i)
    if (!on[i]) out.push_back(i);
  return out;
}

bool FunctionSpace::same_layout(const FunctionSpace& o) const {
  return mesh_ == o.mesh_ && degree_ == o.degree_ && region_ == o.region_ && tag_ == o.tag_;
}

}  // namespace fsi
