#include "bakhfem/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bakhfem/basis.hpp"
#include "bakhfem/quadrature.hpp"

namespace bakhfem {

ErrorNorms error_norms(const FemFunction& uh, const Field& u, const Field& u_x,
                       const Field& u_y, double epsilon, int q_err) {
  const int k = uh.degree;
  const int q = q_err > 0 ? q_err : k + 3;
  const int n = uh.mesh.cells_per_dir();
  const BasisSet basis(k);
  const QuadRule rule = gauss_rule(q);
  const BasisTable tab = tabulate(basis, rule);
  const int nb = k + 1;

  double l2_sq = 0.0, h1_sq = 0.0, linf = 0.0;
  for (int cj = 0; cj < n; ++cj) {
    for (int ci = 0; ci < n; ++ci) {
      const double x0 = uh.mesh.x.points[ci], hx = uh.mesh.x.steps[ci];
      const double y0 = uh.mesh.y.points[cj], hy = uh.mesh.y.steps[cj];
      for (int qy = 0; qy < q; ++qy) {
        const double* vy = tab.values_at(qy);
        const double* dy = tab.derivs_at(qy);
        const double yq = y0 + rule.points[qy] * hy;
        for (int qx = 0; qx < q; ++qx) {
          const double* vx = tab.values_at(qx);
          const double* dx = tab.derivs_at(qx);
          const double xq = x0 + rule.points[qx] * hx;
          const double wq = rule.weights[qx] * rule.weights[qy] * hx * hy;

          double v = 0.0, gx = 0.0, gy = 0.0;
          for (int b = 0; b < nb; ++b) {
            double row_v = 0.0, row_d = 0.0;
            for (int a = 0; a < nb; ++a) {
              const double c = uh.coeff(k * ci + a, k * cj + b);
              row_v += c * vx[a];
              row_d += c * dx[a];
            }
            v += vy[b] * row_v;
            gx += vy[b] * row_d / hx;
            gy += dy[b] / hy * row_v;
          }
          const double du = u(xq, yq) - v;
          const double dux = u_x(xq, yq) - gx;
          const double duy = u_y(xq, yq) - gy;
          l2_sq += wq * du * du;
          h1_sq += wq * (dux * dux + duy * duy);
          linf = std::max(linf, std::abs(du));
        }
      }
    }
  }
  ErrorNorms norms;
  norms.l2 = std::sqrt(l2_sq);
  norms.h1_semi = std::sqrt(h1_sq);
  norms.energy = std::sqrt(epsilon * h1_sq + l2_sq);
  norms.linf_quad = linf;
  return norms;
}

ErrorNorms error_norms(const FemFunction& uh, const ExactSolution& exact,
                       double epsilon, int q_err) {
  return error_norms(uh, exact.u, exact.u_x, exact.u_y, epsilon, q_err);
}

double observed_order(double e_coarse, double e_fine, int n_coarse,
                      int n_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || n_fine <= n_coarse) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::log(e_coarse / e_fine) /
         std::log(static_cast<double>(n_fine) / n_coarse);
}

double least_squares_order(std::span<const int> ns,
                           std::span<const double> errors) {
  if (ns.size() != errors.size() || ns.size() < 2) {
    throw std::invalid_argument("least_squares_order: need >= 2 points");
  }
  const std::size_t m = ns.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(static_cast<double>(ns[i]));
    const double ly = std::log(errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return -slope;
}

bool ConvergenceTable::all_ok() const {
  for (const Row& r : rows) {
    if (!r.ok) return false;
  }
  return true;
}

std::vector<double> ConvergenceTable::eps_groups() const {
  std::vector<double> groups;
  for (const Row& r : rows) {
    bool seen = false;
    for (double g : groups) seen = seen || g == r.eps;
    if (!seen) groups.push_back(r.eps);
  }
  return groups;
}

std::vector<int> ConvergenceTable::group_ns(double eps) const {
  std::vector<int> ns;
  for (const Row& r : rows) {
    if (r.eps == eps) ns.push_back(r.n);
  }
  return ns;
}

std::vector<double> ConvergenceTable::column_values(const std::string& column,
                                                    double eps) const {
  std::size_t ci = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == column) ci = i;
  }
  if (ci == columns.size()) {
    throw std::invalid_argument("unknown table column: " + column);
  }
  std::vector<double> vals;
  for (const Row& r : rows) {
    if (r.eps == eps) vals.push_back(r.values[ci]);
  }
  return vals;
}

namespace {

MeshConfig direction_config(const StudyOptions& opts, int n, double eps,
                            double beta) {
  MeshConfig cfg;
  cfg.n = n;
  cfg.epsilon = eps;
  cfg.sigma = opts.sigma > 0 ? opts.sigma : opts.degree + 1;
  cfg.beta = beta;
  cfg.allow_large_eps = opts.allow_large_eps;
  return cfg;
}

}  // namespace

ConvergenceTable solve_convergence_study(const StudyOptions& opts) {
  if (opts.eps_list.empty() || opts.n_list.empty()) {
    throw std::invalid_argument("study: eps and n lists must be nonempty");
  }
  ConvergenceTable table;
  table.layout = ConvergenceTable::Layout::PaperGrouped;
  table.columns = {"energy"};
  table.metadata = {
      {"study", "solve"},
      {"problem", opts.problem},
      {"k", std::to_string(opts.degree)},
      {"sigma", std::to_string(opts.sigma > 0 ? opts.sigma : opts.degree + 1)},
      {"beta_x", std::to_string(opts.beta_x)},
      {"beta_y", std::to_string(opts.beta_y)},
      {"solver",
       opts.solver.method == SolveMethod::Gmres ? "gmres" : "direct"},
      {"q", std::to_string(opts.quad_points > 0 ? opts.quad_points
                                                : opts.degree + 2)},
      {"q_err", std::to_string(opts.quad_points_err > 0 ? opts.quad_points_err
                                                        : opts.degree + 3)},
  };

  for (double eps : opts.eps_list) {
    for (int n : opts.n_list) {
      ConvergenceTable::Row row;
      row.eps = eps;
      row.n = n;
      try {
        const TensorMesh2D mesh =
            tensor_mesh(direction_config(opts, n, eps, opts.beta_x),
                        direction_config(opts, n, eps, opts.beta_y));
        auto [problem, exact] = make_problem(opts.problem, eps);
        AssemblyOptions aopts;
        aopts.quad_points = opts.quad_points;
        const SparseSystem sys =
            assemble_system(mesh, opts.degree, problem, aopts);
        auto [x, stats] = solve(sys, opts.solver);
        const FemFunction uh = lift_interior(sys, x);
        const ErrorNorms norms =
            error_norms(uh, exact, eps, opts.quad_points_err);
        row.values = {norms.energy};
        row.iterations = stats.iterations;
        row.residual = stats.rel_residual;
        row.seconds = stats.seconds;
      } catch (const SolverError& err) {
        row.ok = false;
        row.values = {std::numeric_limits<double>::quiet_NaN()};
        row.note = err.what();
        row.iterations = err.stats.iterations;
        row.residual = err.stats.rel_residual;
      }
      if (opts.progress) opts.progress(row);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

ConvergenceTable interp_convergence_study(const StudyOptions& opts) {
  if (opts.eps_list.empty() || opts.n_list.empty()) {
    throw std::invalid_argument("study: eps and n lists must be nonempty");
  }
  ConvergenceTable table;
  table.layout = ConvergenceTable::Layout::RateColumns;
  table.columns = {"E1_l2",  "E1_energy",  "E2_l2", "E2_energy",
                   "E12_l2", "E12_energy", "S_l2"};
  table.metadata = {
      {"study", "interp"},
      {"k", std::to_string(opts.degree)},
      {"sigma", std::to_string(opts.sigma > 0 ? opts.sigma : opts.degree + 1)},
      {"beta_x", std::to_string(opts.beta_x)},
      {"beta_y", std::to_string(opts.beta_y)},
  };

  for (double eps : opts.eps_list) {
    const SolutionDecomposition dec = paper_decomposition(eps);
    for (int n : opts.n_list) {
      const TensorMesh2D mesh =
          tensor_mesh(direction_config(opts, n, eps, opts.beta_x),
                      direction_config(opts, n, eps, opts.beta_y));
      const int q_err = opts.quad_points_err;

      const FemFunction e1 = interpolate_standard(dec.E1, mesh, opts.degree);
      const FemFunction e2 = interpolate_standard(dec.E2, mesh, opts.degree);
      const FemFunction e12 = interpolate_standard(dec.E12, mesh, opts.degree);
      const FemFunction s = interpolate_standard(dec.S, mesh, opts.degree);

      const ErrorNorms n1 =
          error_norms(e1, dec.E1, dec.E1_x, dec.E1_y, eps, q_err);
      const ErrorNorms n2 =
          error_norms(e2, dec.E2, dec.E2_x, dec.E2_y, eps, q_err);
      const ErrorNorms n12 =
          error_norms(e12, dec.E12, dec.E12_x, dec.E12_y, eps, q_err);
      const ErrorNorms ns = error_norms(s, dec.S, dec.S_x, dec.S_y, eps, q_err);

      ConvergenceTable::Row row;
      row.eps = eps;
      row.n = n;
      row.values = {n1.l2,  n1.energy,  n2.l2, n2.energy,
                    n12.l2, n12.energy, ns.l2};
      if (opts.progress) opts.progress(row);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string fortran_sci(double v) {
  if (v == 0.0) return "0.000E+00";
  if (std::isnan(v)) return "nan";
  const bool neg = v < 0.0;
  const double a = std::abs(v);
  int e = static_cast<int>(std::floor(std::log10(a))) + 1;
  char mant[24];
  std::snprintf(mant, sizeof mant, "%.3f", a / std::pow(10.0, e));
  if (mant[0] == '1') { // rounding carried the mantissa to 1.000
    ++e;
    std::snprintf(mant, sizeof mant, "%.3f", a / std::pow(10.0, e));
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%sE%+03d", neg ? "-" : "", mant, e);
  return buf;
}

namespace {

std::string order_str(double order) {
  if (std::isnan(order)) return "---";
  char buf[24];
  std::snprintf(buf, sizeof buf, "%.2f", order);
  return buf;
}

std::string eps_str(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

void emit_text(const ConvergenceTable& t, std::ostream& out) {
  for (const auto& [key, value] : t.metadata) {
    out << "# " << key << " = " << value << '\n';
  }
  const std::vector<double> groups = t.eps_groups();
  if (t.layout == ConvergenceTable::Layout::PaperGrouped &&
      t.columns.size() == 1) {
    // errors across N, observed orders beneath, one block per eps
    char head[24];
    std::snprintf(head, sizeof head, "%-10s", "eps");
    out << head;
    const std::vector<int> ns = t.group_ns(groups.front());
    for (int n : ns) {
      char buf[24];
      std::snprintf(buf, sizeof buf, "%12d", n);
      out << buf;
    }
    out << '\n';
    for (double eps : groups) {
      const std::vector<int> gn = t.group_ns(eps);
      const std::vector<double> ev = t.column_values(t.columns[0], eps);
      std::ostringstream line1, line2;
      char label[24];
      std::snprintf(label, sizeof label, "%-10s", eps_str(eps).c_str());
      line1 << label;
      std::snprintf(label, sizeof label, "%-10s", "order");
      line2 << label;
      for (std::size_t i = 0; i < gn.size(); ++i) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%12s", fortran_sci(ev[i]).c_str());
        line1 << buf;
        const double ord =
            (i + 1 < gn.size())
                ? observed_order(ev[i], ev[i + 1], gn[i], gn[i + 1])
                : std::numeric_limits<double>::quiet_NaN();
        std::snprintf(buf, sizeof buf, "%12s", order_str(ord).c_str());
        line2 << buf;
      }
      out << line1.str() << '\n' << line2.str() << '\n';
    }
    return;
  }

  // rate layout: one row per N, (value, order) pairs per tracked norm
  for (double eps : groups) {
    out << "eps = " << eps_str(eps) << '\n';
    out << "N";
    for (const std::string& c : t.columns) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%14s%8s", c.c_str(), "order");
      out << buf;
    }
    out << '\n';
    const std::vector<int> gn = t.group_ns(eps);
    for (std::size_t i = 0; i < gn.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%-6d", gn[i]);
      out << buf;
      for (const std::string& c : t.columns) {
        const std::vector<double> ev = t.column_values(c, eps);
        const double ord =
            (i + 1 < gn.size())
                ? observed_order(ev[i], ev[i + 1], gn[i], gn[i + 1])
                : std::numeric_limits<double>::quiet_NaN();
        std::snprintf(buf, sizeof buf, "%14s%8s", fortran_sci(ev[i]).c_str(),
                      order_str(ord).c_str());
        out << buf;
      }
      out << '\n';
    }
  }
}

void emit_csv(const ConvergenceTable& t, std::ostream& out) {
  for (const auto& [key, value] : t.metadata) {
    out << "# " << key << " = " << value << '\n';
  }
  out << "eps,n";
  for (const std::string& c : t.columns) {
    out << ',' << c << ',' << c << "_order";
  }
  out << ",iterations,residual,seconds,ok,note\n";
  char buf[64];
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    std::snprintf(buf, sizeof buf, "%.17g", row.eps);
    out << buf << ',' << row.n;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row.values[c]);
      out << ',' << buf;
      // order against the next row of the same eps group
      double ord = std::numeric_limits<double>::quiet_NaN();
      if (r + 1 < t.rows.size() && t.rows[r + 1].eps == row.eps) {
        ord = observed_order(row.values[c], t.rows[r + 1].values[c], row.n,
                             t.rows[r + 1].n);
      }
      if (std::isnan(ord)) {
        out << ',';
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", ord);
        out << ',' << buf;
      }
    }
    std::snprintf(buf, sizeof buf, "%.17g", row.residual);
    out << ',' << row.iterations << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.17g", row.seconds);
    out << ',' << buf << ',' << (row.ok ? 1 : 0) << ',' << row.note << '\n';
  }
}

}  // namespace

void emit_table(const ConvergenceTable& table, TableFormat format,
                std::ostream& out) {
  if (table.rows.empty()) {
    throw std::invalid_argument("emit_table: table is empty");
  }
  switch (format) {
    case TableFormat::Text: emit_text(table, out); return;
    case TableFormat::Csv: emit_csv(table, out); return;
  }
  throw std::invalid_argument("emit_table: unknown format");
}

ConvergenceTable parse_table_csv(std::istream& in) {
  ConvergenceTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
          while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.erase(s.begin());
          while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                                s.back() == '\r'))
            s.pop_back();
        };
        trim(key);
        trim(value);
        table.metadata.emplace_back(key, value);
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (!have_header) {
      // eps,n,<col>,<col>_order,...,iterations,residual,seconds,ok,note
      for (std::size_t i = 2; i + 5 < fields.size(); i += 2) {
        table.columns.push_back(fields[i]);
      }
      have_header = true;
      continue;
    }
    ConvergenceTable::Row row;
    row.eps = std::strtod(fields[0].c_str(), nullptr);
    row.n = std::atoi(fields[1].c_str());
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      row.values.push_back(std::strtod(fields[2 + 2 * c].c_str(), nullptr));
    }
    const std::size_t tail = 2 + 2 * table.columns.size();
    row.iterations = std::atol(fields[tail].c_str());
    row.residual = std::strtod(fields[tail + 1].c_str(), nullptr);
    row.seconds = std::strtod(fields[tail + 2].c_str(), nullptr);
    row.ok = fields[tail + 3] == "1";
    if (tail + 4 < fields.size()) row.note = fields[tail + 4];
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bakhfem
