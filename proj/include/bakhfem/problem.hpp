#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bakhfem {

using Field = std::function<double(double, double)>;

// Coefficients of -eps*Lap(u) - b.grad(u) + c*u = f on (0,1)^2 with
// homogeneous Dirichlet data, plus the constants of the coercivity
// condition b1 >= beta1 > 0, b2 >= beta2 > 0, c + div(b)/2 >= gamma > 0.
struct Problem {
  Field b1, b2, c, f;
  Field db1_dx, db2_dy; // analytic derivatives, used by verify_assumptions
  double epsilon = 1e-6;
  double beta1 = 1.0;
  double beta2 = 1.0;
  double gamma = 1.0;
};

// u = S + E1 + E2 + E12 with values and first partials of each component.
struct SolutionDecomposition {
  Field S, S_x, S_y;
  Field E1, E1_x, E1_y;
  Field E2, E2_x, E2_y;
  Field E12, E12_x, E12_y;
};

struct ExactSolution {
  Field u, u_x, u_y;
  std::optional<SolutionDecomposition> decomposition;
};

struct AssumptionReport {
  double min_b1 = 0, min_b1_x = 0, min_b1_y = 0;
  double min_b2 = 0, min_b2_x = 0, min_b2_y = 0;
  double min_coercivity = 0, min_co_x = 0, min_co_y = 0; // c + div(b)/2
  bool violated = false;
};

// The convection-diffusion example of the reproduction study:
// b = (2+x-y, 2-x+y), c = 2, and f manufactured so that
// u = 2 sin(pi x)(1 - e^{-2x/eps})(1-y)^2 (1 - e^{-y/eps}).
std::pair<Problem, ExactSolution> paper_problem(double epsilon);

// S = 2 sin(pi x)(1-y)^2, E1 = -S e^{-2x/eps}, E2 = -S e^{-y/eps},
// E12 = S e^{-(2x+y)/eps}; the sum telescopes to u.
SolutionDecomposition paper_decomposition(double epsilon);

// Constant coefficients b = (1,1), c = 1 with smooth exact solution
// u = sin(pi x) sin(pi y); no layers, any epsilon.
std::pair<Problem, ExactSolution> constant_problem(double epsilon);

// Minima of b1, b2 and c + div(b)/2 over an (m+1)x(m+1) sample grid.
AssumptionReport verify_assumptions(const Problem& p, int grid);

// Registry: "paper-example", "constant-coefficients".
std::pair<Problem, ExactSolution> make_problem(const std::string& name,
                                               double epsilon);
std::vector<std::string> problem_names();

}  // namespace bakhfem
