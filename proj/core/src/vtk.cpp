#include "fsi/vtk.hpp"

#include <array>
#include <fstream>
#include <ostream>

#include "fsi/errors.hpp"

namespace fsi {

namespace {

// VTK edge order against the local edge table of ReferenceMesh.
constexpr std::array<int, 3> kTriEdges{0, 2, 1};
constexpr std::array<int, 6> kTetEdges{0, 3, 1, 2, 4, 5};

// Value of component c at every mesh P2 node (0 where the field is absent).
std::vector<double> nodal_component(const ReferenceMesh& mesh, const FieldSnapshot& f, int c) {
  const auto& s = *f.space;
  std::vector<double> out(mesh.num_nodes(2), 0.0);
  for (int dof = 0; dof < s.num_dofs(); ++dof) out[s.node(dof)] = f.at(dof, c);
  if (s.degree() == 2) return out;
  const int nv = mesh.num_vertices();
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& ed = mesh.edge(e);
    const int a = s.dof_of_node(ed[0]), b = s.dof_of_node(ed[1]);
    if (a >= 0 && b >= 0) out[nv + e] = 0.5 * (f.at(a, c) + f.at(b, c));
  }
  return out;
}

void write_point_field(std::ostream& os, const ReferenceMesh& mesh, const NamedField& nf) {
  const FieldSnapshot& f = *nf.field;
  if (!f.space || &f.space->mesh() != &mesh) throw ShapeError("vtk field '" + nf.name + "' is not on the mesh");
  const int d = mesh.dim();
  const int nc = f.components;
  std::vector<std::vector<double>> comp(nc);
  for (int c = 0; c < nc; ++c) comp[c] = nodal_component(mesh, f, c);
  const int n = mesh.num_nodes(2);
  if (nc == 1) {
    os << "SCALARS " << nf.name << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < n; ++i) os << comp[0][i] << '\n';
  } else if (nc == d) {
    os << "VECTORS " << nf.name << " double\n";
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) os << (c < d ? comp[c][i] : 0.0) << (c < 2 ? ' ' : '\n');
    }
  } else if (nc == d * d) {
    os << "TENSORS " << nf.name << " double\n";
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) os << (r < d && c < d ? comp[r * d + c][i] : 0.0) << (c < 2 ? ' ' : '\n');
    }
  } else {
    throw ShapeError("vtk field '" + nf.name + "' has an unsupported component count");
  }
}

}  // namespace

void write_vtk(std::ostream& os, const ReferenceMesh& mesh, const std::vector<NamedField>& fields,
               const std::string& title) {
  const int d = mesh.dim();
  const int n = mesh.num_nodes(2);
  os.precision(12);
  os << "# vtk DataFile Version 2.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << n << " double\n";
  for (int i = 0; i < n; ++i) {
    const SmallVec x = mesh.node_coord(i);
    os << x(0) << ' ' << x(1) << ' ' << (d == 3 ? x(2) : 0.0) << '\n';
  }
  const int per = d == 2 ? 6 : 10;
  const int nc = mesh.num_cells();
  os << "CELLS " << nc << ' ' << nc * (per + 1) << '\n';
  for (int c = 0; c < nc; ++c) {
    const auto nodes = mesh.cell_nodes(c, 2);
    os << per;
    for (int v = 0; v <= d; ++v) os << ' ' << nodes[v];
    for (int k = 0; k < per - d - 1; ++k) os << ' ' << nodes[d + 1 + (d == 2 ? kTriEdges[k] : kTetEdges[k])];
    os << '\n';
  }
  os << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) os << (d == 2 ? 22 : 24) << '\n';
  os << "CELL_DATA " << nc << "\nSCALARS region int 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) os << static_cast<int>(mesh.region(c)) << '\n';
  if (!fields.empty()) {
    os << "POINT_DATA " << n << '\n';
    for (const auto& f : fields) write_point_field(os, mesh, f);
  }
}

void write_vtk_file(const std::string& path, const ReferenceMesh& mesh, const std::vector<NamedField>& fields,
                    const std::string& title) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  write_vtk(os, mesh, fields, title);
}

}  // namespace fsi
