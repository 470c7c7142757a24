#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fsi/field.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

struct NamedField {
  std::string name;
  const FieldSnapshot* field = nullptr;
};

/// Legacy ASCII 2.0 unstructured grid on quadratic cells (VTK types 22 and 24).
/// Points are the mesh P2 nodes; point data for nodes outside a field's region
/// are written as zero. P1 fields are linearly filled at edge midpoints.
/// Components 1, d and d*d map to SCALARS, VECTORS and TENSORS (padded to 3).
/// Cell data carry the region id.
void write_vtk(std::ostream& os, const ReferenceMesh& mesh, const std::vector<NamedField>& fields,
               const std::string& title = "fsi");
void write_vtk_file(const std::string& path, const ReferenceMesh& mesh, const std::vector<NamedField>& fields,
                    const std::string& title = "fsi");

}  // namespace fsi
