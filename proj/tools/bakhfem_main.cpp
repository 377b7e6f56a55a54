#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bakhfem/analysis.hpp"
#include "bakhfem/dofmap.hpp"
#include "bakhfem/kernels.hpp"
#include "bakhfem/mesh.hpp"
#include "bakhfem/problem.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    values.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_double_list(text)) values.push_back(static_cast<int>(v));
  return values;
}

void print_progress(const bakhfem::ConvergenceTable::Row& row) {
  std::fprintf(stderr, "eps=%g n=%d iters=%ld relres=%.3e secs=%.3f%s\n",
               row.eps, row.n, row.iterations, row.residual, row.seconds,
               row.ok ? "" : "  FAILED");
}

// "key = value" per line, '#' comments; flags given on the command line win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.pop_back();
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    trim(key);
    trim(value);
    CLI::Option* op = cmd->get_option_no_throw("--" + key);
    if (op == nullptr) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    }
    if (op->count() > 0) continue;
    op->add_result(value);
    op->run_callback();
  }
}

int run_mesh(int n, double eps, double sigma, double beta, bool allow_large,
             const std::string& axis, bool report) {
  bakhfem::MeshConfig cfg;
  cfg.n = n;
  cfg.epsilon = eps;
  cfg.sigma = sigma;
  cfg.beta = beta;
  cfg.allow_large_eps = allow_large;
  const bakhfem::Mesh1D mesh = bakhfem::bakhvalov_points(cfg);
  if (report) {
    std::cout << "axis:              " << axis << '\n'
              << bakhfem::format_report(bakhfem::mesh_report(mesh, cfg));
  } else {
    bakhfem::dump_points(mesh, std::cout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite elements on layer-adapted graded meshes for "
               "convection-diffusion problems"};
  app.require_subcommand(1);

  // ---- mesh ----
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a 1-D graded mesh");
  int m_n = 8;
  double m_eps = 1e-6, m_sigma = 2.0, m_beta = 1.0;
  std::string m_axis = "x";
  bool m_report = false, m_allow_large = false;
  mesh_cmd->add_option("--n", m_n, "cells per direction (even)")->required();
  mesh_cmd->add_option("--eps", m_eps, "perturbation parameter")->required();
  mesh_cmd->add_option("--sigma", m_sigma, "grading exponent");
  mesh_cmd->add_option("--beta", m_beta, "layer decay constant");
  mesh_cmd->add_option("--axis", m_axis, "direction label (x or y)")
      ->check(CLI::IsMember({"x", "y"}));
  mesh_cmd->add_flag("--report", m_report, "print step-size diagnostics");
  mesh_cmd->add_flag("--allow-large-eps", m_allow_large,
                     "permit eps > 1/n (outside the theory)");

  // ---- converge ----
  auto* conv_cmd =
      app.add_subcommand("converge", "solve and tabulate energy errors");
  std::string c_config;
  conv_cmd->add_option("--config", c_config,
                       "key = value file mirroring the flags below");
  int c_k = 1, c_restart = 50, c_q = 0, c_qerr = 0;
  double c_sigma = 0.0, c_beta_x = 2.0, c_beta_y = 1.0, c_tol = 1e-12;
  std::string c_eps = "1e-6", c_n = "8,16,32,64";
  std::string c_problem = "paper-example", c_solver = "gmres";
  std::string c_precond = "ilu0", c_out, c_dump_matrix, c_dump_dofs;
  std::string c_kernels = "auto";
  bool c_text = false, c_allow_large = false;
  conv_cmd->add_option("--k", c_k, "element degree");
  conv_cmd->add_option("--sigma", c_sigma, "grading exponent (0: k+1)");
  conv_cmd->add_option("--beta-x", c_beta_x, "decay constant, x direction");
  conv_cmd->add_option("--beta-y", c_beta_y, "decay constant, y direction");
  conv_cmd->add_option("--eps", c_eps, "comma-separated epsilon list");
  conv_cmd->add_option("--n", c_n, "comma-separated cell counts");
  conv_cmd->add_option("--problem", c_problem, "problem registry name");
  conv_cmd->add_option("--solver", c_solver, "gmres or direct")
      ->check(CLI::IsMember({"gmres", "direct"}));
  conv_cmd->add_option("--tol", c_tol, "solver relative residual target");
  conv_cmd->add_option("--restart", c_restart, "gmres restart length");
  conv_cmd->add_option("--precond", c_precond, "none or ilu0")
      ->check(CLI::IsMember({"none", "ilu0"}));
  conv_cmd->add_option("--q", c_q, "assembly Gauss points (0: k+2)");
  conv_cmd->add_option("--q-err", c_qerr, "error-norm Gauss points (0: k+3)");
  conv_cmd->add_option("--out", c_out, "write the table as csv");
  conv_cmd->add_flag("--text", c_text, "print the text table to stdout");
  conv_cmd->add_option("--dump-matrix", c_dump_matrix,
                       "write the assembled matrix (single cell only)");
  conv_cmd->add_option("--dump-dofs", c_dump_dofs,
                       "write the interior dof coordinates (single cell only)");
  conv_cmd->add_flag("--allow-large-eps", c_allow_large,
                     "permit eps > 1/n (outside the theory)");
  conv_cmd->add_option("--kernels", c_kernels, "kernel backend")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  // ---- interp-check ----
  auto* interp_cmd = app.add_subcommand(
      "interp-check", "interpolation error rates of the layer decomposition");
  int i_k = 1, i_qerr = 0;
  double i_sigma = 0.0, i_beta_x = 2.0, i_beta_y = 1.0, i_eps = 1e-6;
  std::string i_n = "8,16,32,64", i_out;
  interp_cmd->add_option("--k", i_k, "element degree");
  interp_cmd->add_option("--sigma", i_sigma, "grading exponent (0: k+1)");
  interp_cmd->add_option("--eps", i_eps, "perturbation parameter");
  interp_cmd->add_option("--n-list", i_n, "comma-separated cell counts");
  interp_cmd->add_option("--beta-x", i_beta_x, "decay constant, x direction");
  interp_cmd->add_option("--beta-y", i_beta_y, "decay constant, y direction");
  interp_cmd->add_option("--q-err", i_qerr, "error-norm Gauss points (0: k+3)");
  interp_cmd->add_option("--out", i_out, "write the table as csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mesh_cmd->parsed()) {
      return run_mesh(m_n, m_eps, m_sigma, m_beta, m_allow_large, m_axis,
                      m_report);
    }

    if (conv_cmd->parsed()) {
      if (!c_config.empty()) apply_config_file(conv_cmd, c_config);
      bakhfem::kernels::select_backend(
          bakhfem::kernels::parse_backend(c_kernels));
      bakhfem::StudyOptions opts;
      opts.degree = c_k;
      opts.sigma = c_sigma;
      opts.beta_x = c_beta_x;
      opts.beta_y = c_beta_y;
      opts.eps_list = parse_double_list(c_eps);
      opts.n_list = parse_int_list(c_n);
      opts.problem = c_problem;
      opts.solver.method = c_solver == "direct" ? bakhfem::SolveMethod::Direct
                                                : bakhfem::SolveMethod::Gmres;
      opts.solver.rel_tol = c_tol;
      opts.solver.restart = c_restart;
      opts.solver.precond = c_precond == "none" ? bakhfem::Precond::None
                                                : bakhfem::Precond::Ilu0;
      opts.quad_points = c_q;
      opts.quad_points_err = c_qerr;
      opts.allow_large_eps = c_allow_large;
      opts.progress = print_progress;

      if (!c_dump_matrix.empty() || !c_dump_dofs.empty()) {
        if (opts.eps_list.size() != 1 || opts.n_list.size() != 1) {
          std::cerr << "--dump-matrix/--dump-dofs need a single (eps, n) cell\n";
          return 2;
        }
        bakhfem::MeshConfig cx, cy;
        cx.n = cy.n = opts.n_list[0];
        cx.epsilon = cy.epsilon = opts.eps_list[0];
        cx.sigma = cy.sigma = opts.sigma > 0 ? opts.sigma : opts.degree + 1;
        cx.beta = opts.beta_x;
        cy.beta = opts.beta_y;
        cx.allow_large_eps = cy.allow_large_eps = opts.allow_large_eps;
        const bakhfem::TensorMesh2D mesh = bakhfem::tensor_mesh(cx, cy);
        auto [problem, exact] =
            bakhfem::make_problem(opts.problem, opts.eps_list[0]);
        bakhfem::AssemblyOptions aopts;
        aopts.quad_points = opts.quad_points;
        const bakhfem::SparseSystem sys =
            bakhfem::assemble_system(mesh, opts.degree, problem, aopts);
        if (!c_dump_matrix.empty()) {
          std::ofstream out(c_dump_matrix);
          bakhfem::write_matrix_market(sys, out);
        }
        if (!c_dump_dofs.empty()) {
          std::ofstream out(c_dump_dofs);
          bakhfem::dump_dofs(sys.dof_map, out);
        }
      }

      const bakhfem::ConvergenceTable table =
          bakhfem::solve_convergence_study(opts);
      if (!c_out.empty()) {
        std::ofstream out(c_out);
        bakhfem::emit_table(table, bakhfem::TableFormat::Csv, out);
      }
      if (c_text || c_out.empty()) {
        bakhfem::emit_table(table, bakhfem::TableFormat::Text, std::cout);
      }
      return table.all_ok() ? 0 : 1;
    }

    if (interp_cmd->parsed()) {
      bakhfem::StudyOptions opts;
      opts.degree = i_k;
      opts.sigma = i_sigma;
      opts.beta_x = i_beta_x;
      opts.beta_y = i_beta_y;
      opts.eps_list = {i_eps};
      opts.n_list = parse_int_list(i_n);
      opts.quad_points_err = i_qerr;
      const bakhfem::ConvergenceTable table =
          bakhfem::interp_convergence_study(opts);
      if (!i_out.empty()) {
        std::ofstream out(i_out);
        bakhfem::emit_table(table, bakhfem::TableFormat::Csv, out);
      }
      bakhfem::emit_table(table, bakhfem::TableFormat::Text, std::cout);
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
