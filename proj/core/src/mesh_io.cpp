#include <istream>
#include <ostream>
#include <sstream>

#include "fsi/errors.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

void write_mesh(std::ostream& os, const ReferenceMesh& mesh) {
  const int d = mesh.dim();
  os << "fsi-mesh 1\n";
  os << "dim " << d << "\n";
  os << "vertices " << mesh.num_vertices() << "\n";
  os.precision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    for (int k = 0; k < d; ++k) os << (k ? " " : "") << mesh.vertices()(k, v);
    os << "\n";
  }
  os << "cells " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) {
    os << to_string(mesh.region(c));
    for (int k = 0; k <= d; ++k) os << " " << mesh.cell(c)[k];
    os << "\n";
  }
}

MeshPtr read_mesh(std::istream& is) {
  std::string word;
  int version = 0;
  if (!(is >> word >> version) || word != "fsi-mesh" || version != 1)
    throw MeshError("not an fsi-mesh version 1 stream");
  int d = 0;
  if (!(is >> word >> d) || word != "dim" || (d != 2 && d != 3)) throw MeshError("bad dim line");
  int nv = 0;
  if (!(is >> word >> nv) || word != "vertices" || nv <= 0) throw MeshError("bad vertices line");
  Eigen::MatrixXd X(d, nv);
  for (int v = 0; v < nv; ++v)
    for (int k = 0; k < d; ++k)
      if (!(is >> X(k, v))) throw MeshError("truncated vertex block");
  int nc = 0;
  if (!(is >> word >> nc) || word != "cells" || nc <= 0) throw MeshError("bad cells line");
  std::vector<std::array<int, 4>> cells(nc, std::array<int, 4>{-1, -1, -1, -1});
  std::vector<Region> regions(nc);
  for (int c = 0; c < nc; ++c) {
    if (!(is >> word)) throw MeshError("truncated cell block");
    if (word == "solid")
      regions[c] = Region::Solid;
    else if (word == "fluid")
      regions[c] = Region::Fluid;
    else
      throw MeshError("unknown region '" + word + "'");
    for (int k = 0; k <= d; ++k)
      if (!(is >> cells[c][k])) throw MeshError("truncated cell block");
  }
  return std::make_shared<ReferenceMesh>(d, std::move(X), std::move(cells), std::move(regions));
}

}  // namespace fsi
