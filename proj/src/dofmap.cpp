#include "bakhfem/dofmap.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace bakhfem {
namespace {

std::vector<double> direction_coords(const Mesh1D& mesh, int k) {
  const int n = mesh.cells();
  std::vector<double> coords(static_cast<std::size_t>(k) * n + 1);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < k; ++s) {
      coords[static_cast<std::size_t>(k) * i + s] =
          mesh.points[i] + (static_cast<double>(s) / k) * mesh.steps[i];
    }
  }
  coords.back() = mesh.points[n];
  return coords;
}

}  // namespace

DofMap build_dof_map(const TensorMesh2D& mesh, int degree) {
  if (degree < 1) throw std::invalid_argument("dofmap: degree must be >= 1");
  DofMap dof;
  dof.degree = degree;
  dof.cells = mesh.cells_per_dir();
  dof.coord_x = direction_coords(mesh.x, degree);
  dof.coord_y = direction_coords(mesh.y, degree);
  return dof;
}

void dump_dofs(const DofMap& dof, std::ostream& out) {
  const int n1 = dof.nodes_per_dir();
  char buf[96];
  for (int iy = 1; iy < n1 - 1; ++iy) {
    for (int ix = 1; ix < n1 - 1; ++ix) {
      std::snprintf(buf, sizeof buf, "%ld %.17g %.17g\n",
                    dof.interior_index(ix, iy), dof.coord_x[ix],
                    dof.coord_y[iy]);
      out << buf;
    }
  }
}

}  // namespace bakhfem
