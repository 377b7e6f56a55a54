#pragma once

#include <array>
#include <span>
#include <vector>

#include "bakhfem/assembly.hpp"
#include "bakhfem/mesh.hpp"
#include "bakhfem/problem.hpp"

namespace bakhfem {

// Piecewise tensor-product polynomial over all (kN+1)^2 nodal values,
// boundary included. Evaluation at a node returns its coefficient.
struct FemFunction {
  TensorMesh2D mesh;
  int degree = 1;
  std::vector<double> coeffs; // node-id order, x fastest

  int nodes_per_dir() const { return degree * mesh.cells_per_dir() + 1; }
  double coeff(int ix, int iy) const {
    return coeffs[static_cast<long>(iy) * nodes_per_dir() + ix];
  }
  double& coeff(int ix, int iy) {
    return coeffs[static_cast<long>(iy) * nodes_per_dir() + ix];
  }

  double eval(double x, double y) const;
  std::array<double, 2> grad(double x, double y) const;
};

// Standard Lagrange interpolation: coefficient at every node equals g there.
FemFunction interpolate_standard(const Field& g, const TensorMesh2D& mesh,
                                 int degree);

// Node-zeroing sets of the boundary-preserving interpolant: the layer
// components lose their nodal values on the strip lines next to the
// transition point.
struct PiSpec {
  std::vector<int> x_lines; // global x-node indices k*(N/2-1)+s, s=0..k-1
  std::vector<int> y_lines; // global y-node indices k*(N/2-1)+t, t=0..k-1

  // E1: (x_lines) x (interior y); E2: (interior x) x (y_lines);
  // E12: (x_lines) x (y_lines), exactly k^2 nodes.
  long e1_count(int nodes_per_dir) const {
    return static_cast<long>(x_lines.size()) * (nodes_per_dir - 2);
  }
  long e2_count(int nodes_per_dir) const {
    return static_cast<long>(y_lines.size()) * (nodes_per_dir - 2);
  }
  long e12_count() const {
    return static_cast<long>(x_lines.size()) * y_lines.size();
  }
};

PiSpec make_pi_spec(int cells, int degree);

// Pi u = S^I + pi_1 E1 + pi_2 E2 + pi_12 E12, where each pi_i E_i is the
// standard interpolant of E_i with coefficients zeroed on its PiSpec set.
// Boundary coefficients vanish; off the zeroing sets Pi u's coefficient
// equals the nodal value of u = S + E1 + E2 + E12.
FemFunction interpolate_pi(const SolutionDecomposition& dec,
                           const TensorMesh2D& mesh, int degree);

// u^N lifted from interior dofs with zero boundary coefficients.
FemFunction lift_interior(const SparseSystem& sys,
                          std::span<const double> interior);

// Worst cell-wise ratio max|interp| / max|component| with the interpolant
// sampled on an s x s in-cell grid and the component on a 2s x 2s grid.
struct StabilityReport {
  struct Entry {
    double worst_standard = 0;
    double worst_masked = 0;
  };
  Entry e1, e2, e12;
  double worst() const;
};

StabilityReport interp_stability_check(const SolutionDecomposition& dec,
                                       const TensorMesh2D& mesh, int degree,
                                       int samples);

}  // namespace bakhfem
