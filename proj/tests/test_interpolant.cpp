#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bakhfem/dofmap.hpp"
#include "bakhfem/fem_function.hpp"
#include "bakhfem/problem.hpp"

using namespace bakhfem;

namespace {

Mesh1D uniform_mesh(int n) {
  Mesh1D mesh;
  mesh.points.resize(n + 1);
  for (int i = 0; i <= n; ++i) mesh.points[i] = static_cast<double>(i) / n;
  mesh.steps.assign(n, 1.0 / n);
  return mesh;
}

TensorMesh2D paper_mesh(int n, double eps, double sigma) {
  const MeshConfig cx{.n = n, .epsilon = eps, .sigma = sigma, .beta = 2.0};
  const MeshConfig cy{.n = n, .epsilon = eps, .sigma = sigma, .beta = 1.0};
  return tensor_mesh(cx, cy);
}

}  // namespace

TEST_CASE("coefficients equal the field at the nodes") {
  const TensorMesh2D mesh = paper_mesh(8, 1e-3, 2.0);
  auto g = [](double x, double y) { return x * y; };
  const FemFunction fn = interpolate_standard(g, mesh, 1);
  const DofMap dof = build_dof_map(mesh, 1);
  for (int iy = 0; iy < dof.nodes_per_dir(); ++iy) {
    for (int ix = 0; ix < dof.nodes_per_dir(); ++ix) {
      CHECK(fn.coeff(ix, iy) == g(dof.coord_x[ix], dof.coord_y[iy]));
    }
  }
}

TEST_CASE("global Qk functions are reproduced everywhere") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const TensorMesh2D mesh = paper_mesh(8, 1e-3, 2.0);
  for (int k : {1, 2, 3}) {
    auto g = [k](double x, double y) {
      return std::pow(x, k) * std::pow(y, k);
    };
    const FemFunction fn = interpolate_standard(g, mesh, k);
    for (int it = 0; it < 200; ++it) {
      const double x = dist(rng), y = dist(rng);
      CHECK(std::abs(fn.eval(x, y) - g(x, y)) <= 1e-12);
    }
  }
}

TEST_CASE("bilinear cell-center value is the corner average") {
  const TensorMesh2D mesh{uniform_mesh(4), uniform_mesh(4)};
  auto g = [](double x, double y) {
    return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
  };
  const FemFunction fn = interpolate_standard(g, mesh, 1);
  const double avg =
      0.25 * (g(0.0, 0.0) + g(0.25, 0.0) + g(0.0, 0.25) + g(0.25, 0.25));
  CHECK(fn.eval(0.125, 0.125) == doctest::Approx(avg).epsilon(1e-14));
}

TEST_CASE("zeroing sets have the advertised sizes") {
  for (int k : {1, 2, 3}) {
    for (int n : {8, 16}) {
      const PiSpec spec = make_pi_spec(n, k);
      const int n1 = k * n + 1;
      CHECK(spec.e1_count(n1) == static_cast<long>(k) * (k * n - 1));
      CHECK(spec.e2_count(n1) == static_cast<long>(k) * (k * n - 1));
      CHECK(spec.e12_count() == static_cast<long>(k) * k);
      for (int line : spec.x_lines) {
        CHECK(line > 0);
        CHECK(line < n1 - 1);
      }
    }
  }
}

TEST_CASE("boundary-preserving interpolant invariants") {
  for (int k : {1, 2}) {
    for (int n : {8, 16}) {
      for (double eps : {1e-4, 1e-8}) {
        CAPTURE(k);
        CAPTURE(n);
        CAPTURE(eps);
        const TensorMesh2D mesh = paper_mesh(n, eps, 2.0 * (k + 1));
        const SolutionDecomposition dec = paper_decomposition(eps);
        auto [p, ex] = paper_problem(eps);
        const FemFunction pi = interpolate_pi(dec, mesh, k);
        const PiSpec spec = make_pi_spec(n, k);
        const DofMap dof = build_dof_map(mesh, k);
        const int n1 = dof.nodes_per_dir();

        // boundary coefficients vanish exactly
        for (int i = 0; i < n1; ++i) {
          CHECK(pi.coeff(i, 0) == 0.0);
          CHECK(pi.coeff(i, n1 - 1) == 0.0);
          CHECK(pi.coeff(0, i) == 0.0);
          CHECK(pi.coeff(n1 - 1, i) == 0.0);
        }
        // and the unmasked telescoping already puts them at roundoff
        for (int i = 0; i < n1; ++i) {
          const double top = dec.S(dof.coord_x[i], 1.0) +
                             dec.E1(dof.coord_x[i], 1.0) +
                             dec.E2(dof.coord_x[i], 1.0) +
                             dec.E12(dof.coord_x[i], 1.0);
          CHECK(std::abs(top) <= 1e-14);
        }

        // off the zeroing sets the coefficient is the nodal value of u
        auto on_x_line = [&](int ix) {
          for (int l : spec.x_lines) {
            if (l == ix) return true;
          }
          return false;
        };
        auto on_y_line = [&](int iy) {
          for (int l : spec.y_lines) {
            if (l == iy) return true;
          }
          return false;
        };
        for (int iy = 1; iy < n1 - 1; ++iy) {
          for (int ix = 1; ix < n1 - 1; ++ix) {
            const double x = dof.coord_x[ix], y = dof.coord_y[iy];
            const double u = ex.u(x, y);
            double expect = u;
            if (on_x_line(ix)) expect -= dec.E1(x, y);
            if (on_y_line(iy)) expect -= dec.E2(x, y);
            if (on_x_line(ix) && on_y_line(iy)) expect -= dec.E12(x, y);
            CHECK(std::abs(pi.coeff(ix, iy) - expect) <= 1e-14);
          }
        }
      }
    }
  }
}

TEST_CASE("strip-line coefficient equals u - E1 by direct evaluation") {
  // eps=1e-4, N=8, k=1, sigma=2, beta=(2,1): node (x_3, y_4) sits on the
  // x-strip and off the y-strip
  const TensorMesh2D mesh = paper_mesh(8, 1e-4, 2.0);
  const SolutionDecomposition dec = paper_decomposition(1e-4);
  auto [p, ex] = paper_problem(1e-4);
  const FemFunction pi = interpolate_pi(dec, mesh, 1);
  const double x = mesh.x.points[3], y = mesh.y.points[4];
  const double via_op = pi.coeff(3, 4);
  const double direct = ex.u(x, y) - dec.E1(x, y);
  CHECK(std::abs(via_op - direct) <= 1e-14);
}

TEST_CASE("interpolant evaluation returns coefficients at nodes") {
  const TensorMesh2D mesh = paper_mesh(8, 1e-4, 3.0);
  const SolutionDecomposition dec = paper_decomposition(1e-4);
  const FemFunction fn = interpolate_standard(dec.E2, mesh, 2);
  const DofMap dof = build_dof_map(mesh, 2);
  for (int iy : {0, 3, 7, 11}) {
    for (int ix : {0, 2, 9, 16}) {
      const double v = fn.eval(dof.coord_x[ix], dof.coord_y[iy]);
      CHECK(std::abs(v - fn.coeff(ix, iy)) <= 1e-13);
    }
  }
}

TEST_CASE("max-norm stability of the interpolants") {
  // bilinear interpolation cannot exceed the cell max of the data
  const TensorMesh2D mesh = paper_mesh(16, 1e-4, 2.0);
  const SolutionDecomposition dec = paper_decomposition(1e-4);
  const StabilityReport rep1 = interp_stability_check(dec, mesh, 1, 5);
  CHECK(rep1.worst() <= 1.0 + 1e-12);

  const TensorMesh2D mesh2 = paper_mesh(16, 1e-4, 3.0);
  const StabilityReport rep2 = interp_stability_check(dec, mesh2, 2, 5);
  CHECK(rep2.worst() <= 1.05);
}

TEST_CASE("interior lift keeps the boundary at zero") {
  const TensorMesh2D mesh = paper_mesh(8, 1e-4, 2.0);
  auto [p, ex] = paper_problem(1e-4);
  const SparseSystem sys = assemble_system(mesh, 1, p);
  std::vector<double> interior(sys.n);
  for (long i = 0; i < sys.n; ++i) interior[i] = 1.0 + i;
  const FemFunction fn = lift_interior(sys, interior);
  const int n1 = fn.nodes_per_dir();
  for (int i = 0; i < n1; ++i) {
    CHECK(fn.coeff(i, 0) == 0.0);
    CHECK(fn.coeff(0, i) == 0.0);
  }
  CHECK(fn.coeff(1, 1) == 1.0);
  CHECK(fn.mesh.x.points[8] == 1.0);
}
