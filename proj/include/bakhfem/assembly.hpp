#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "bakhfem/dofmap.hpp"
#include "bakhfem/mesh.hpp"
#include "bakhfem/problem.hpp"

namespace bakhfem {

struct AssemblyOptions {
  int quad_points = 0;       // Gauss points per direction; 0 means degree+2
  bool deterministic = true; // fixed lexicographic cell traversal
};

// Assembled linear system over interior dofs after Dirichlet elimination.
// All value arrays share one CSR pattern:
//   a      = eps*K + convection + reaction   (the solved operator)
//   k_part = unweighted stiffness  (grad,grad)
//   m_part = unweighted mass       (u,v)
// so energy-norm and coercivity checks can reuse exact parts.
struct SparseSystem {
  long n = 0;
  std::vector<long> row_ptr;
  std::vector<int> col_idx;
  std::vector<double> a;
  std::vector<double> k_part;
  std::vector<double> m_part;
  std::vector<double> rhs;
  double epsilon = 0;
  DofMap dof_map;

  long nnz() const { return static_cast<long>(col_idx.size()); }
};

// Entry (r,c) = eps (grad th_c, grad th_r) - (b.grad th_c, th_r) + (c th_c, th_r),
// each cell integrated with a q x q tensor Gauss rule; rhs_r = (f, th_r).
// Boundary rows/columns are dropped (homogeneous data, no rhs correction).
SparseSystem assemble_system(const TensorMesh2D& mesh, int degree,
                             const Problem& p, const AssemblyOptions& opts = {});

// y = A x.
void apply_operator(const SparseSystem& sys, std::span<const double> x,
                    std::span<double> y);

// (eps * v'Kv + v'Mv)^{1/2} from the retained stiffness and mass parts.
double discrete_energy_norm(const SparseSystem& sys, std::span<const double> v);

// Matrix Market coordinate format (general real), 1-based indices.
void write_matrix_market(const SparseSystem& sys, std::ostream& out);

}  // namespace bakhfem
