#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bakhfem/assembly.hpp"

namespace bakhfem {

enum class SolveMethod { Gmres, Direct };
enum class Precond { None, Ilu0 };

struct SolveOptions {
  SolveMethod method = SolveMethod::Gmres;
  int restart = 50;
  double rel_tol = 1e-12;
  long max_iters = 0; // 0 means 10 * dimension
  Precond precond = Precond::Ilu0;
};

struct SolveStats {
  long iterations = 0;
  double rel_residual = 0; // recomputed from A, x, b on exit
  double seconds = 0;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveStats stats)
      : std::runtime_error(what), stats(stats) {}
  SolveStats stats;
};

// ILU(0): incomplete LU on the sparsity pattern of A. Rows must contain
// their diagonal entry; a zero pivot raises SolverError naming the row.
class Ilu0 {
 public:
  Ilu0(long n, std::span<const long> row_ptr, std::span<const int> col_idx,
       std::span<const double> values);

  // z = (LU)^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;

 private:
  long n_;
  const long* row_ptr_;
  const int* col_idx_;
  std::vector<double> lu_;
  std::vector<long> diag_;
};

// Banded LU with partial pivoting (LAPACK-style band storage). Used as the
// robustness fallback for strongly convection-dominated systems.
class BandedLU {
 public:
  BandedLU(long n, int kl, int ku);

  void set(long i, long j, double v);
  void factor(); // throws SolverError on a singular pivot
  void solve(std::span<double> b) const;

  static BandedLU from_csr(long n, std::span<const long> row_ptr,
                           std::span<const int> col_idx,
                           std::span<const double> values);

 private:
  long n_;
  int kl_, ku_, ldab_;
  bool factored_ = false;
  std::vector<double> ab_; // column-major, row kl+ku+i-j
  std::vector<long> piv_;
};

// Solve the assembled system. GMRES(restart) with optional ILU(0)
// preconditioning iterates until ||Ax-b|| / ||b|| <= rel_tol; the direct
// path runs banded LU plus iterative refinement. stats.rel_residual is
// always recomputed from A, x, b after the solve.
std::pair<std::vector<double>, SolveStats> solve(const SparseSystem& sys,
                                                 const SolveOptions& opts = {});

}  // namespace bakhfem
