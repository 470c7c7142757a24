#pragma once

#include <array>
#include <memory>
#include <string>

#include "fsi/assembly.hpp"
#include "fsi/field.hpp"

namespace fsi {

/// Nodal gradient recovery on a volume space: at every dof a least-squares
/// cubic is fitted to the nodal values of a surrounding patch and
/// differentiated at the node. Reproduces cubic polynomials exactly.
class NodalGradient {
 public:
  explicit NodalGradient(SpacePtr space);
  static std::shared_ptr<const NodalGradient> of(const SpacePtr& space);

  const SpacePtr& space() const { return space_; }
  const SpMat& direction(int k) const { return G_[k]; }

  /// Gradient of a scalar field -> vector field.
  FieldSnapshot scalar_gradient(const FieldSnapshot& f) const;
  /// Gradient of a vector field -> tensor field with (i, j) = d_j f_i.
  FieldSnapshot vector_gradient(const FieldSnapshot& f) const;
  /// Row-wise divergence of a tensor field -> vector field, (Div A)_i = d_j A_ij.
  FieldSnapshot tensor_divergence(const FieldSnapshot& A) const;
  /// Divergence of a vector field -> scalar field.
  FieldSnapshot vector_divergence(const FieldSnapshot& v) const;

 private:
  SpacePtr space_;
  std::array<SpMat, 3> G_;
};

enum class NormKind { L2, H1, H2, H2Seminorm };
NormKind parse_norm_kind(const std::string& s);

/// Norm of the finite element interpolant. H1 and H2 are full norms; H2 is
/// cellwise (broken) for the second derivatives. Boundary fields support L2 only.
double discrete_norm(const FieldSnapshot& f, NormKind kind);

/// Interpolation estimate of the H^s norm (0 <= s <= 2):
/// ||f||_k^(1-theta) ||f||_(k+1)^theta with s = k + theta.
double fractional_norm_estimate(const FieldSnapshot& f, double s);

/// Restriction of a nodal field to a tagged boundary. Throws ShapeError when
/// the tag does not touch the field's region.
FieldSnapshot trace_extract(const FieldSnapshot& f, BoundaryTag tag);
/// Shared boundary space of a mesh (one instance per mesh, tag and degree).
SpacePtr boundary_space(const MeshPtr& mesh, BoundaryTag tag, int degree);
Trajectory trace_extract(const Trajectory& tr, BoundaryTag tag);

/// Nodal unit normals on a boundary space, averaged over adjacent facets
/// (weighted by facet measure).
FieldSnapshot nodal_normals(const SpacePtr& boundary_space);

/// Cached Gram matrices used by the norms of a space.
struct NormMatrices {
  SpMat mass;
  SpMat grad;
  SpMat hess;
};
const NormMatrices& norm_matrices(const SpacePtr& s);

/// Time-L2 norm of a level-wise spatial norm (trapezoid rule).
double time_l2(const Trajectory& tr, NormKind kind);
/// Max over levels of a spatial norm.
double time_max(const Trajectory& tr, NormKind kind);

}  // namespace fsi
