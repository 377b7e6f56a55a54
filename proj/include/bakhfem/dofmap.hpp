#pragma once

#include <iosfwd>
#include <vector>

#include "bakhfem/mesh.hpp"

namespace bakhfem {

// Global tensor-product node numbering for degree-k elements, lexicographic
// with x fastest. Per direction the kN+1 node coordinates follow
// x(k*i + s) = x_i + (s/k) h_i, with the last node equal to x_N. Interior
// nodes (those off the domain boundary) carry contiguous equation indices.
struct DofMap {
  int degree = 1;
  int cells = 0;
  std::vector<double> coord_x;
  std::vector<double> coord_y;

  int nodes_per_dir() const { return degree * cells + 1; }
  long node_count() const {
    const long n1 = nodes_per_dir();
    return n1 * n1;
  }
  long node_id(int ix, int iy) const {
    return static_cast<long>(iy) * nodes_per_dir() + ix;
  }
  bool is_boundary(int ix, int iy) const {
    const int last = nodes_per_dir() - 1;
    return ix == 0 || iy == 0 || ix == last || iy == last;
  }
  // -1 for boundary nodes.
  long interior_index(int ix, int iy) const {
    if (is_boundary(ix, iy)) return -1;
    const long w = nodes_per_dir() - 2;
    return static_cast<long>(iy - 1) * w + (ix - 1);
  }
  long interior_count() const {
    const long w = nodes_per_dir() - 2;
    return w * w;
  }
};

DofMap build_dof_map(const TensorMesh2D& mesh, int degree);

// "index x y" per interior dof, for debugging.
void dump_dofs(const DofMap& dof, std::ostream& out);

}  // namespace bakhfem
