#include "bakhfem/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bakhfem {
namespace {

constexpr double kPi = std::numbers::pi;

// u factors as g(x) * w(y) with
//   g(x) = 2 sin(pi x) (1 - e^{-2x/eps}),  w(y) = (1-y)^2 (1 - e^{-y/eps}).
struct PaperFactors {
  double eps;

  double g(double x) const {
    const double e = std::exp(-2.0 * x / eps);
    return 2.0 * std::sin(kPi * x) * (1.0 - e);
  }
  double gp(double x) const {
    const double e = std::exp(-2.0 * x / eps);
    return 2.0 * kPi * std::cos(kPi * x) * (1.0 - e) +
           2.0 * std::sin(kPi * x) * (2.0 / eps) * e;
  }
  double gpp(double x) const {
    const double e = std::exp(-2.0 * x / eps);
    return -2.0 * kPi * kPi * std::sin(kPi * x) * (1.0 - e) +
           (8.0 * kPi / eps) * std::cos(kPi * x) * e -
           (8.0 / (eps * eps)) * std::sin(kPi * x) * e;
  }
  double w(double y) const {
    const double e = std::exp(-y / eps);
    return (1.0 - y) * (1.0 - y) * (1.0 - e);
  }
  double wp(double y) const {
    const double e = std::exp(-y / eps);
    return -2.0 * (1.0 - y) * (1.0 - e) + (1.0 - y) * (1.0 - y) * e / eps;
  }
  double wpp(double y) const {
    const double e = std::exp(-y / eps);
    return 2.0 * (1.0 - e) - 4.0 * (1.0 - y) * e / eps -
           (1.0 - y) * (1.0 - y) * e / (eps * eps);
  }
};

}  // namespace

std::pair<Problem, ExactSolution> paper_problem(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("paper_problem: epsilon must lie in (0, 1)");
  }
  const PaperFactors fac{epsilon};

  Problem p;
  p.epsilon = epsilon;
  p.b1 = [](double x, double y) { return 2.0 + x - y; };
  p.b2 = [](double x, double y) { return 2.0 - x + y; };
  p.c = [](double, double) { return 2.0; };
  p.db1_dx = [](double, double) { return 1.0; };
  p.db2_dy = [](double, double) { return 1.0; };
  p.beta1 = 1.0; // infima of b1, b2 over the closed square
  p.beta2 = 1.0;
  p.gamma = 3.0; // c + div(b)/2 = 2 + 1
  p.f = [fac, epsilon](double x, double y) {
    const double u = fac.g(x) * fac.w(y);
    const double ux = fac.gp(x) * fac.w(y);
    const double uy = fac.g(x) * fac.wp(y);
    const double lap = fac.gpp(x) * fac.w(y) + fac.g(x) * fac.wpp(y);
    return -epsilon * lap - (2.0 + x - y) * ux - (2.0 - x + y) * uy + 2.0 * u;
  };

  ExactSolution ex;
  ex.u = [fac](double x, double y) { return fac.g(x) * fac.w(y); };
  ex.u_x = [fac](double x, double y) { return fac.gp(x) * fac.w(y); };
  ex.u_y = [fac](double x, double y) { return fac.g(x) * fac.wp(y); };
  ex.decomposition = paper_decomposition(epsilon);
  return {std::move(p), std::move(ex)};
}

SolutionDecomposition paper_decomposition(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument(
        "paper_decomposition: epsilon must lie in (0, 1)");
  }
  const double eps = epsilon;

  auto S = [](double x, double y) {
    return 2.0 * std::sin(kPi * x) * (1.0 - y) * (1.0 - y);
  };
  auto Sx = [](double x, double y) {
    return 2.0 * kPi * std::cos(kPi * x) * (1.0 - y) * (1.0 - y);
  };
  auto Sy = [](double x, double y) {
    return -4.0 * std::sin(kPi * x) * (1.0 - y);
  };

  SolutionDecomposition d;
  d.S = S;
  d.S_x = Sx;
  d.S_y = Sy;
  d.E1 = [S, eps](double x, double y) {
    return -S(x, y) * std::exp(-2.0 * x / eps);
  };
  d.E1_x = [S, Sx, eps](double x, double y) {
    const double e = std::exp(-2.0 * x / eps);
    return (-Sx(x, y) + S(x, y) * 2.0 / eps) * e;
  };
  d.E1_y = [Sy, eps](double x, double y) {
    return -Sy(x, y) * std::exp(-2.0 * x / eps);
  };
  d.E2 = [S, eps](double x, double y) {
    return -S(x, y) * std::exp(-y / eps);
  };
  d.E2_x = [Sx, eps](double x, double y) {
    return -Sx(x, y) * std::exp(-y / eps);
  };
  d.E2_y = [S, Sy, eps](double x, double y) {
    const double e = std::exp(-y / eps);
    return (-Sy(x, y) + S(x, y) / eps) * e;
  };
  d.E12 = [S, eps](double x, double y) {
    return S(x, y) * std::exp(-(2.0 * x + y) / eps);
  };
  d.E12_x = [S, Sx, eps](double x, double y) {
    const double e = std::exp(-(2.0 * x + y) / eps);
    return (Sx(x, y) - 2.0 / eps * S(x, y)) * e;
  };
  d.E12_y = [S, Sy, eps](double x, double y) {
    const double e = std::exp(-(2.0 * x + y) / eps);
    return (Sy(x, y) - S(x, y) / eps) * e;
  };
  return d;
}

std::pair<Problem, ExactSolution> constant_problem(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("constant_problem: epsilon must lie in (0, 1]");
  }
  Problem p;
  p.epsilon = epsilon;
  p.b1 = [](double, double) { return 1.0; };
  p.b2 = [](double, double) { return 1.0; };
  p.c = [](double, double) { return 1.0; };
  p.db1_dx = [](double, double) { return 0.0; };
  p.db2_dy = [](double, double) { return 0.0; };
  p.beta1 = 1.0;
  p.beta2 = 1.0;
  p.gamma = 1.0;
  p.f = [epsilon](double x, double y) {
    const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
    const double cx = std::cos(kPi * x), cy = std::cos(kPi * y);
    return 2.0 * epsilon * kPi * kPi * sx * sy - kPi * cx * sy -
           kPi * sx * cy + sx * sy;
  };

  ExactSolution ex;
  ex.u = [](double x, double y) {
    return std::sin(kPi * x) * std::sin(kPi * y);
  };
  ex.u_x = [](double x, double y) {
    return kPi * std::cos(kPi * x) * std::sin(kPi * y);
  };
  ex.u_y = [](double x, double y) {
    return kPi * std::sin(kPi * x) * std::cos(kPi * y);
  };
  return {std::move(p), std::move(ex)};
}

AssumptionReport verify_assumptions(const Problem& p, int grid) {
  if (grid < 1) throw std::invalid_argument("verify_assumptions: grid >= 1");
  AssumptionReport r;
  bool first = true;
  for (int j = 0; j <= grid; ++j) {
    for (int i = 0; i <= grid; ++i) {
      const double x = static_cast<double>(i) / grid;
      const double y = static_cast<double>(j) / grid;
      const double v1 = p.b1(x, y);
      const double v2 = p.b2(x, y);
      const double co = p.c(x, y) + 0.5 * (p.db1_dx(x, y) + p.db2_dy(x, y));
      if (first || v1 < r.min_b1) {
        r.min_b1 = v1;
        r.min_b1_x = x;
        r.min_b1_y = y;
      }
      if (first || v2 < r.min_b2) {
        r.min_b2 = v2;
        r.min_b2_x = x;
        r.min_b2_y = y;
      }
      if (first || co < r.min_coercivity) {
        r.min_coercivity = co;
        r.min_co_x = x;
        r.min_co_y = y;
      }
      first = false;
    }
  }
  r.violated = !(r.min_b1 > 0.0 && r.min_b2 > 0.0 && r.min_coercivity > 0.0);
  return r;
}

std::pair<Problem, ExactSolution> make_problem(const std::string& name,
                                               double epsilon) {
  if (name == "paper-example") return paper_problem(epsilon);
  if (name == "constant-coefficients") return constant_problem(epsilon);
  throw std::invalid_argument("unknown problem: " + name);
}

std::vector<std::string> problem_names() {
  return {"paper-example", "constant-coefficients"};
}

}  // namespace bakhfem
