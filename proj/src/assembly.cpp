#include "bakhfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "bakhfem/basis.hpp"
#include "bakhfem/kernels.hpp"
#include "bakhfem/quadrature.hpp"

namespace bakhfem {
namespace {

// Range of global 1-D node indices coupled to node g through shared cells.
struct CoupleRange {
  int lo, hi;
};

CoupleRange couple_range(int g, int k, int cells) {
  // Node g lies in cells i with k*i <= g <= k*i + k.
  const int cell_lo = (g <= k) ? 0 : (g - 1) / k;
  const int cell_hi = std::min(cells - 1, g / k);
  return {k * cell_lo, k * cell_hi + k};
}

long find_in_row(const SparseSystem& sys, long row, int col) {
  const auto begin = sys.col_idx.begin() + sys.row_ptr[row];
  const auto end = sys.col_idx.begin() + sys.row_ptr[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) {
    throw std::logic_error("assembly: missing pattern entry");
  }
  return it - sys.col_idx.begin();
}

}  // namespace

SparseSystem assemble_system(const TensorMesh2D& mesh, int degree,
                             const Problem& p, const AssemblyOptions& opts) {
  const int k = degree;
  const int cells = mesh.cells_per_dir();
  if (mesh.x.cells() != mesh.y.cells()) {
    throw std::invalid_argument("assembly: mesh directions disagree on n");
  }
  const int q = opts.quad_points > 0 ? opts.quad_points : k + 2;
  if (q < 1) throw std::invalid_argument("assembly: quad_points must be >= 1");

  SparseSystem sys;
  sys.dof_map = build_dof_map(mesh, k);
  sys.epsilon = p.epsilon;
  const DofMap& dof = sys.dof_map;
  const int n1 = dof.nodes_per_dir();
  sys.n = dof.interior_count();

  // Pattern: row-sorted column lists over interior dofs.
  sys.row_ptr.assign(sys.n + 1, 0);
  {
    std::vector<int> cols;
    cols.reserve((2 * k + 1) * (2 * k + 1));
    // first pass: counts
    for (int iy = 1; iy < n1 - 1; ++iy) {
      const CoupleRange ry = couple_range(iy, k, cells);
      for (int ix = 1; ix < n1 - 1; ++ix) {
        const CoupleRange rx = couple_range(ix, k, cells);
        long count = 0;
        for (int jy = std::max(1, ry.lo); jy <= std::min(n1 - 2, ry.hi); ++jy) {
          count += std::min(n1 - 2, rx.hi) - std::max(1, rx.lo) + 1;
        }
        sys.row_ptr[dof.interior_index(ix, iy) + 1] = count;
      }
    }
    for (long r = 0; r < sys.n; ++r) sys.row_ptr[r + 1] += sys.row_ptr[r];
    sys.col_idx.resize(sys.row_ptr[sys.n]);
    for (int iy = 1; iy < n1 - 1; ++iy) {
      const CoupleRange ry = couple_range(iy, k, cells);
      for (int ix = 1; ix < n1 - 1; ++ix) {
        const CoupleRange rx = couple_range(ix, k, cells);
        long pos = sys.row_ptr[dof.interior_index(ix, iy)];
        for (int jy = std::max(1, ry.lo); jy <= std::min(n1 - 2, ry.hi); ++jy) {
          for (int jx = std::max(1, rx.lo); jx <= std::min(n1 - 2, rx.hi);
               ++jx) {
            sys.col_idx[pos++] = static_cast<int>(dof.interior_index(jx, jy));
          }
        }
      }
    }
  }
  sys.a.assign(sys.col_idx.size(), 0.0);
  sys.k_part.assign(sys.col_idx.size(), 0.0);
  sys.m_part.assign(sys.col_idx.size(), 0.0);
  sys.rhs.assign(sys.n, 0.0);

  const BasisSet basis(k);
  const QuadRule rule = gauss_rule(q);
  const BasisTable tab = tabulate(basis, rule);

  const int nb = k + 1;
  const int nloc = nb * nb;
  std::vector<double> ae(nloc * nloc), ke(nloc * nloc), me(nloc * nloc);
  std::vector<double> fe(nloc), phi(nloc), px(nloc), py(nloc);
  std::vector<long> scatter(nloc);

  // Lexicographic cell traversal; the scatter order is fixed by it.
  for (int cj = 0; cj < cells; ++cj) {
    for (int ci = 0; ci < cells; ++ci) {
      const double x0 = mesh.x.points[ci], hx = mesh.x.steps[ci];
      const double y0 = mesh.y.points[cj], hy = mesh.y.steps[cj];
      std::fill(ae.begin(), ae.end(), 0.0);
      std::fill(ke.begin(), ke.end(), 0.0);
      std::fill(me.begin(), me.end(), 0.0);
      std::fill(fe.begin(), fe.end(), 0.0);

      for (int qy = 0; qy < q; ++qy) {
        const double* vy = tab.values_at(qy);
        const double* dy = tab.derivs_at(qy);
        const double yq = y0 + rule.points[qy] * hy;
        for (int qx = 0; qx < q; ++qx) {
          const double* vx = tab.values_at(qx);
          const double* dx = tab.derivs_at(qx);
          const double xq = x0 + rule.points[qx] * hx;
          const double wq = rule.weights[qx] * rule.weights[qy] * hx * hy;

          for (int b = 0; b < nb; ++b) {
            for (int a = 0; a < nb; ++a) {
              phi[b * nb + a] = vy[b] * vx[a];
              px[b * nb + a] = vy[b] * dx[a] / hx;
              py[b * nb + a] = dy[b] / hy * vx[a];
            }
          }
          const double b1 = p.b1(xq, yq);
          const double b2 = p.b2(xq, yq);
          const double cc = p.c(xq, yq);
          const double fv = p.f(xq, yq);
          const double eps = p.epsilon;
          for (int r = 0; r < nloc; ++r) {
            const double wphi = wq * phi[r];
            const double wpx = wq * px[r];
            const double wpy = wq * py[r];
            double* aer = ae.data() + r * nloc;
            double* ker = ke.data() + r * nloc;
            double* mer = me.data() + r * nloc;
            for (int c = 0; c < nloc; ++c) {
              const double grad = wpx * px[c] + wpy * py[c];
              ker[c] += grad;
              mer[c] += wphi * phi[c];
              // sign convention: the convection term enters as -(b.grad u, v)
              aer[c] += eps * grad - wphi * (b1 * px[c] + b2 * py[c]) +
                        cc * wphi * phi[c];
            }
            fe[r] += wphi * fv;
          }
        }
      }

      for (int b = 0; b < nb; ++b) {
        for (int a = 0; a < nb; ++a) {
          const int gx = k * ci + a;
          const int gy = k * cj + b;
          scatter[b * nb + a] = dof.interior_index(gx, gy);
        }
      }
      for (int r = 0; r < nloc; ++r) {
        const long row = scatter[r];
        if (row < 0) continue;
        sys.rhs[row] += fe[r];
        for (int c = 0; c < nloc; ++c) {
          const long colg = scatter[c];
          if (colg < 0) continue;
          const long pos = find_in_row(sys, row, static_cast<int>(colg));
          sys.a[pos] += ae[r * nloc + c];
          sys.k_part[pos] += ke[r * nloc + c];
          sys.m_part[pos] += me[r * nloc + c];
        }
      }
    }
  }
  return sys;
}

void apply_operator(const SparseSystem& sys, std::span<const double> x,
                    std::span<double> y) {
  if (static_cast<long>(x.size()) != sys.n ||
      static_cast<long>(y.size()) != sys.n) {
    throw std::invalid_argument("apply_operator: dimension mismatch");
  }
  kernels::csr_matvec(sys.row_ptr, sys.col_idx, sys.a, x, y);
}

double discrete_energy_norm(const SparseSystem& sys,
                            std::span<const double> v) {
  if (static_cast<long>(v.size()) != sys.n) {
    throw std::invalid_argument("discrete_energy_norm: dimension mismatch");
  }
  std::vector<double> tmp(sys.n);
  kernels::csr_matvec(sys.row_ptr, sys.col_idx, sys.k_part, v, tmp);
  const double vKv = kernels::dot(v, tmp);
  kernels::csr_matvec(sys.row_ptr, sys.col_idx, sys.m_part, v, tmp);
  const double vMv = kernels::dot(v, tmp);
  return std::sqrt(sys.epsilon * vKv + vMv);
}

void write_matrix_market(const SparseSystem& sys, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << sys.n << ' ' << sys.n << ' ' << sys.nnz() << '\n';
  char buf[96];
  for (long r = 0; r < sys.n; ++r) {
    for (long pidx = sys.row_ptr[r]; pidx < sys.row_ptr[r + 1]; ++pidx) {
      std::snprintf(buf, sizeof buf, "%ld %d %.17g\n", r + 1,
                    sys.col_idx[pidx] + 1, sys.a[pidx]);
      out << buf;
    }
  }
}

}  // namespace bakhfem
