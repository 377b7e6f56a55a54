#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bakhfem/fem_function.hpp"
#include "bakhfem/problem.hpp"
#include "bakhfem/solver.hpp"

namespace bakhfem {

struct ErrorNorms {
  double l2 = 0;        // ||u - u_h||
  double h1_semi = 0;   // |u - u_h|_1
  double energy = 0;    // (eps*h1_semi^2 + l2^2)^{1/2}
  double linf_quad = 0; // max over quadrature points
};

// Cell-wise q_err x q_err Gauss accumulation against analytic value and
// first partials.
ErrorNorms error_norms(const FemFunction& uh, const Field& u, const Field& u_x,
                       const Field& u_y, double epsilon, int q_err);
ErrorNorms error_norms(const FemFunction& uh, const ExactSolution& exact,
                       double epsilon, int q_err);

// Observed order log2-style: log(e_coarse/e_fine) / log(n_fine/n_coarse),
// attached to the coarser N. NaN marks the absent last entry.
double observed_order(double e_coarse, double e_fine, int n_coarse, int n_fine);

// Positive least-squares slope of log(e) against log(N).
double least_squares_order(std::span<const int> ns,
                           std::span<const double> errors);

struct ConvergenceTable {
  enum class Layout { PaperGrouped, RateColumns };

  Layout layout = Layout::PaperGrouped;
  std::vector<std::string> columns; // tracked error norms

  struct Row {
    double eps = 0;
    int n = 0;
    std::vector<double> values; // one per column
    long iterations = 0;
    double residual = 0;
    double seconds = 0;
    bool ok = true;
    std::string note;
  };
  std::vector<Row> rows; // grouped by eps, n ascending within a group
  std::vector<std::pair<std::string, std::string>> metadata;

  bool all_ok() const;
  // Values of one column for one eps group, n ascending.
  std::vector<double> column_values(const std::string& column,
                                    double eps) const;
  std::vector<int> group_ns(double eps) const;
  std::vector<double> eps_groups() const;
};

struct StudyOptions {
  int degree = 1;
  double sigma = 0; // 0 means degree + 1
  double beta_x = 2.0;
  double beta_y = 1.0;
  std::vector<double> eps_list;
  std::vector<int> n_list;
  std::string problem = "paper-example";
  SolveOptions solver;
  int quad_points = 0;     // 0 means degree + 2
  int quad_points_err = 0; // 0 means degree + 3
  bool allow_large_eps = false;
  // Invoked after each completed (eps, N) cell, e.g. for progress lines.
  std::function<void(const ConvergenceTable::Row&)> progress;
};

// Per (eps, N): build mesh, assemble, solve, measure the energy error.
// A non-converged cell is annotated and the study continues.
ConvergenceTable solve_convergence_study(const StudyOptions& opts);

// Interpolation-rate study for the layer decomposition at one eps:
// per N the L2 and energy errors of E1, E2, E12 and the L2 error of S
// under standard interpolation.
ConvergenceTable interp_convergence_study(const StudyOptions& opts);

enum class TableFormat { Text, Csv };

// Text mirrors the reproduction tables (errors as 0.ddd E-notation, orders
// to two decimals, "---" in the last column); csv is one row per (eps, N).
void emit_table(const ConvergenceTable& table, TableFormat format,
                std::ostream& out);

ConvergenceTable parse_table_csv(std::istream& in);

// Fortran-style scientific with three significant digits: "0.339E+00".
std::string fortran_sci(double v);

}  // namespace bakhfem
