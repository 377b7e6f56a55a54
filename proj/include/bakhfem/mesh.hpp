#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bakhfem {

// Parameters of a graded 1-D mesh direction. beta is the layer decay
// constant for this direction (beta1 for x, beta2 for y).
struct MeshConfig {
  int n = 8;             // cells, even, >= 4
  double epsilon = 1e-6; // perturbation parameter, 0 < epsilon <= 1/n
  double sigma = 2.0;    // grading exponent, >= 1
  double beta = 1.0;     // decay constant, > 0
  bool allow_large_eps = false; // permit epsilon > 1/n for exploratory runs

  void validate() const; // throws std::invalid_argument
};

// Graded point set on [0,1]: points[0] = 0, points[n] = 1, strictly
// increasing; steps[i] = points[i+1] - points[i].
struct Mesh1D {
  std::vector<double> points;
  std::vector<double> steps;

  int cells() const { return static_cast<int>(steps.size()); }
};

struct TensorMesh2D {
  Mesh1D x;
  Mesh1D y;

  int cells_per_dir() const { return x.cells(); }
};

// Diagnostic quantities behind the step-size bounds of the graded mesh.
struct MeshReport {
  double h0_over_eps_n = 0;  // h_0 / (eps/N)
  bool fine_monotone = false;  // h_0 <= h_1 <= ... <= h_{N/2-2}
  double coarse_min = 0;       // min of h_i*N over the uniform half
  double coarse_max = 0;       // max of h_i*N over the uniform half
  double transition = 0;       // x_{N/2}
  double layer_width = 0;      // exp(-beta*x_{N/2-1}/eps) = (eps + 2(1-eps)/N)^sigma
};

// Graded points: x_i = -(sigma*eps/beta) * ln(1 - 2(1-eps)i/N) for i <= N/2,
// then equally spaced up to x_N = 1 (evaluated in closed form, so x_N is
// exactly 1 and x_{N/2} corresponds to argument exactly eps).
Mesh1D bakhvalov_points(const MeshConfig& cfg);

// Product mesh; both configs must share n.
TensorMesh2D tensor_mesh(const MeshConfig& cfg_x, const MeshConfig& cfg_y);

MeshReport mesh_report(const Mesh1D& mesh, const MeshConfig& cfg);

// One line per point: "<index> <coordinate>" with 17 significant digits.
void dump_points(const Mesh1D& mesh, std::ostream& out);

std::string format_report(const MeshReport& report);

}  // namespace bakhfem
