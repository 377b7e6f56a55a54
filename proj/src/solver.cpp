#include "bakhfem/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>

#include "bakhfem/kernels.hpp"

namespace bakhfem {
namespace {

double recompute_relative_residual(const SparseSystem& sys,
                                   std::span<const double> x,
                                   std::span<const double> b) {
  std::vector<double> r(sys.n);
  kernels::csr_matvec(sys.row_ptr, sys.col_idx, sys.a, x, r);
  for (long i = 0; i < sys.n; ++i) r[i] = b[i] - r[i];
  const double bnorm = kernels::nrm2(b);
  return bnorm > 0 ? kernels::nrm2(r) / bnorm : kernels::nrm2(r);
}

}  // namespace

Ilu0::Ilu0(long n, std::span<const long> row_ptr, std::span<const int> col_idx,
           std::span<const double> values)
    : n_(n),
      row_ptr_(row_ptr.data()),
      col_idx_(col_idx.data()),
      lu_(values.begin(), values.end()),
      diag_(n) {
  for (long i = 0; i < n_; ++i) {
    long d = -1;
    for (long p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] == i) {
        d = p;
        break;
      }
    }
    if (d < 0) {
      throw SolverError("ilu0: missing diagonal entry in row " +
                            std::to_string(i),
                        {});
    }
    diag_[i] = d;
  }

  // IKJ variant restricted to the pattern of A.
  for (long i = 0; i < n_; ++i) {
    for (long p = row_ptr_[i]; p < row_ptr_[i + 1] && col_idx_[p] < i; ++p) {
      const long j = col_idx_[p];
      const double pivot = lu_[diag_[j]];
      if (pivot == 0.0) {
        throw SolverError("ilu0: zero pivot in row " + std::to_string(j), {});
      }
      const double lij = lu_[p] / pivot;
      lu_[p] = lij;
      long pj = diag_[j] + 1;
      long pi = p + 1;
      const long ej = row_ptr_[j + 1];
      const long ei = row_ptr_[i + 1];
      while (pj < ej && pi < ei) {
        if (col_idx_[pj] < col_idx_[pi]) {
          ++pj;
        } else if (col_idx_[pj] > col_idx_[pi]) {
          ++pi;
        } else {
          lu_[pi] -= lij * lu_[pj];
          ++pi;
          ++pj;
        }
      }
    }
  }
  for (long i = 0; i < n_; ++i) {
    if (lu_[diag_[i]] == 0.0) {
      throw SolverError("ilu0: zero pivot in row " + std::to_string(i), {});
    }
  }
}

void Ilu0::apply(std::span<const double> r, std::span<double> z) const {
  // forward: L has unit diagonal
  for (long i = 0; i < n_; ++i) {
    double s = r[i];
    for (long p = row_ptr_[i]; p < row_ptr_[i + 1] && col_idx_[p] < i; ++p) {
      s -= lu_[p] * z[col_idx_[p]];
    }
    z[i] = s;
  }
  // backward
  for (long i = n_ - 1; i >= 0; --i) {
    double s = z[i];
    for (long p = row_ptr_[i + 1] - 1; p >= row_ptr_[i] && col_idx_[p] > i;
         --p) {
      s -= lu_[p] * z[col_idx_[p]];
    }
    z[i] = s / lu_[diag_[i]];
  }
}

BandedLU::BandedLU(long n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1) {
  const double bytes =
      static_cast<double>(n_) * ldab_ * static_cast<double>(sizeof(double));
  if (bytes > 2e9) {
    throw SolverError("banded lu: factor storage exceeds 2 GB; use gmres", {});
  }
  ab_.assign(static_cast<std::size_t>(n_) * ldab_, 0.0);
  piv_.assign(n_, 0);
}

void BandedLU::set(long i, long j, double v) {
  ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] = v;
}

BandedLU BandedLU::from_csr(long n, std::span<const long> row_ptr,
                            std::span<const int> col_idx,
                            std::span<const double> values) {
  int kl = 0, ku = 0;
  for (long i = 0; i < n; ++i) {
    for (long p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      const long j = col_idx[p];
      kl = std::max<long>(kl, i - j);
      ku = std::max<long>(ku, j - i);
    }
  }
  BandedLU lu(n, kl, ku);
  for (long i = 0; i < n; ++i) {
    for (long p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      lu.set(i, col_idx[p], values[p]);
    }
  }
  return lu;
}

void BandedLU::factor() {
  const int width = kl_ + ku_; // fill width above the diagonal after pivoting
  auto at = [this](long i, long j) -> double& {
    return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
  };
  for (long j = 0; j < n_; ++j) {
    const long ilast = std::min(n_ - 1, j + kl_);
    long p = j;
    double best = std::abs(at(j, j));
    for (long i = j + 1; i <= ilast; ++i) {
      const double v = std::abs(at(i, j));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) {
      throw SolverError("banded lu: singular pivot at column " +
                            std::to_string(j),
                        {});
    }
    piv_[j] = p;
    const long jlast = std::min(n_ - 1, j + width);
    if (p != j) {
      for (long c = j; c <= jlast; ++c) std::swap(at(j, c), at(p, c));
    }
    const double pivot = at(j, j);
    for (long i = j + 1; i <= ilast; ++i) {
      const double l = at(i, j) / pivot;
      at(i, j) = l;
      if (l != 0.0) {
        for (long c = j + 1; c <= jlast; ++c) at(i, c) -= l * at(j, c);
      }
    }
  }
  factored_ = true;
}

void BandedLU::solve(std::span<double> b) const {
  if (!factored_) throw SolverError("banded lu: factor() not called", {});
  auto at = [this](long i, long j) -> double {
    return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
  };
  for (long j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const long ilast = std::min(n_ - 1, j + kl_);
    const double bj = b[j];
    for (long i = j + 1; i <= ilast; ++i) b[i] -= at(i, j) * bj;
  }
  const int width = kl_ + ku_;
  for (long j = n_ - 1; j >= 0; --j) {
    b[j] /= at(j, j);
    const double bj = b[j];
    const long ifirst = std::max<long>(0, j - width);
    for (long i = ifirst; i < j; ++i) b[i] -= at(i, j) * bj;
  }
}

namespace {

std::pair<std::vector<double>, SolveStats> solve_direct(
    const SparseSystem& sys, const SolveOptions&) {
  BandedLU lu = BandedLU::from_csr(sys.n, sys.row_ptr, sys.col_idx, sys.a);
  lu.factor();
  std::vector<double> x(sys.rhs);
  lu.solve(x);

  SolveStats stats;
  // Iterative refinement pushes the residual to factorization roundoff.
  std::vector<double> r(sys.n), dx(sys.n);
  const double bnorm = kernels::nrm2(sys.rhs);
  for (int pass = 0; pass < 2; ++pass) {
    kernels::csr_matvec(sys.row_ptr, sys.col_idx, sys.a, x, r);
    for (long i = 0; i < sys.n; ++i) r[i] = sys.rhs[i] - r[i];
    if (bnorm == 0.0 || kernels::nrm2(r) / bnorm < 1e-15) break;
    dx = r;
    lu.solve(dx);
    kernels::axpy(1.0, dx, x);
    stats.iterations = pass + 1;
  }
  return {std::move(x), stats};
}

std::pair<std::vector<double>, SolveStats> solve_gmres(const SparseSystem& sys,
                                                       const SolveOptions& opts) {
  const long n = sys.n;
  const int m = opts.restart;
  const long max_iters = opts.max_iters > 0 ? opts.max_iters : 10 * n;
  std::unique_ptr<Ilu0> prec;
  if (opts.precond == Precond::Ilu0) {
    prec = std::make_unique<Ilu0>(n, sys.row_ptr, sys.col_idx, sys.a);
  }

  SolveStats stats;
  std::vector<double> x(n, 0.0);
  const double bnorm = kernels::nrm2(sys.rhs);
  if (bnorm == 0.0) return {std::move(x), stats};

  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> h(m, std::vector<double>(m + 1, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1);
  std::vector<double> w(n), z(n), r(sys.rhs);

  auto precondition = [&](const std::vector<double>& in,
                          std::vector<double>& out) {
    if (prec) {
      prec->apply(in, out);
    } else {
      out = in;
    }
  };

  double rel = 1.0;
  while (true) {
    const double beta = kernels::nrm2(r);
    rel = beta / bnorm;
    if (rel <= opts.rel_tol) break;
    if (stats.iterations >= max_iters) {
      stats.rel_residual = rel;
      char msg[96];
      std::snprintf(msg, sizeof msg,
                    "gmres: max iterations exceeded (relres %.3e)", rel);
      throw SolverError(msg, stats);
    }

    v[0] = r;
    kernels::scal(1.0 / beta, v[0]);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    int jstop = -1;
    bool breakdown = false;
    for (int j = 0; j < m && stats.iterations < max_iters; ++j) {
      ++stats.iterations;
      // right-preconditioned Arnoldi step: w = A M^{-1} v_j
      precondition(v[j], z);
      kernels::csr_matvec(sys.row_ptr, sys.col_idx, sys.a, z, w);
      for (int i = 0; i <= j; ++i) {
        const double hij = kernels::dot(w, v[i]);
        h[j][i] = hij;
        kernels::axpy(-hij, v[i], w);
      }
      const double hnext = kernels::nrm2(w);
      h[j][j + 1] = hnext;
      if (hnext > 0.0) {
        v[j + 1] = w;
        kernels::scal(1.0 / hnext, v[j + 1]);
      } else {
        breakdown = true; // happy breakdown: exact solution in this space
      }

      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h[j][i] + sn[i] * h[j][i + 1];
        h[j][i + 1] = -sn[i] * h[j][i] + cs[i] * h[j][i + 1];
        h[j][i] = t;
      }
      const double denom = std::hypot(h[j][j], h[j][j + 1]);
      cs[j] = h[j][j] / denom;
      sn[j] = h[j][j + 1] / denom;
      h[j][j] = denom;
      h[j][j + 1] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] *= cs[j];

      jstop = j;
      if (std::abs(g[j + 1]) / bnorm <= opts.rel_tol || breakdown) break;
    }

    if (jstop >= 0) {
      // back-substitute R y = g and update x through the preconditioner
      std::vector<double> y(jstop + 1);
      for (int i = jstop; i >= 0; --i) {
        double s = g[i];
        for (int l = i + 1; l <= jstop; ++l) s -= h[l][i] * y[l];
        y[i] = s / h[i][i];
      }
      std::fill(w.begin(), w.end(), 0.0);
      for (int l = 0; l <= jstop; ++l) kernels::axpy(y[l], v[l], w);
      precondition(w, z);
      kernels::axpy(1.0, z, x);
    }

    kernels::csr_matvec(sys.row_ptr, sys.col_idx, sys.a, x, r);
    for (long i = 0; i < n; ++i) r[i] = sys.rhs[i] - r[i];
    if (breakdown) {
      rel = kernels::nrm2(r) / bnorm;
      if (rel > opts.rel_tol) {
        stats.rel_residual = rel;
        throw SolverError("gmres: breakdown before convergence", stats);
      }
      break;
    }
  }
  return {std::move(x), stats};
}

}  // namespace

std::pair<std::vector<double>, SolveStats> solve(const SparseSystem& sys,
                                                 const SolveOptions& opts) {
  if (sys.n <= 0) throw std::invalid_argument("solve: empty system");
  if (!(opts.rel_tol > 0.0 && opts.rel_tol < 1.0)) {
    throw std::invalid_argument("solve: rel_tol must lie in (0, 1)");
  }
  if (opts.restart < 1) {
    throw std::invalid_argument("solve: restart must be >= 1");
  }
  const auto t0 = std::chrono::steady_clock::now();
  auto [x, stats] = opts.method == SolveMethod::Direct ? solve_direct(sys, opts)
                                                       : solve_gmres(sys, opts);
  stats.rel_residual = recompute_relative_residual(sys, x, sys.rhs);
  stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(x), stats};
}

}  // namespace bakhfem
