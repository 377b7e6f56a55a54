#include "bakhfem/fem_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bakhfem/basis.hpp"
#include "bakhfem/dofmap.hpp"

namespace bakhfem {
namespace {

// Cell index containing x; the right endpoint belongs to the last cell.
int locate(const std::vector<double>& points, double x) {
  const int n = static_cast<int>(points.size()) - 1;
  const auto it = std::upper_bound(points.begin(), points.end(), x);
  int cell = static_cast<int>(it - points.begin()) - 1;
  return std::clamp(cell, 0, n - 1);
}

}  // namespace

double FemFunction::eval(double x, double y) const {
  const int k = degree;
  const int ci = locate(mesh.x.points, x);
  const int cj = locate(mesh.y.points, y);
  const double tx = (x - mesh.x.points[ci]) / mesh.x.steps[ci];
  const double ty = (y - mesh.y.points[cj]) / mesh.y.steps[cj];
  const BasisSet basis(k);
  double vx[kMaxDegree + 1], dx[kMaxDegree + 1];
  double vy[kMaxDegree + 1], dy[kMaxDegree + 1];
  basis.eval(std::clamp(tx, 0.0, 1.0), {vx, vx + k + 1}, {dx, dx + k + 1});
  basis.eval(std::clamp(ty, 0.0, 1.0), {vy, vy + k + 1}, {dy, dy + k + 1});
  double s = 0.0;
  for (int b = 0; b <= k; ++b) {
    double row = 0.0;
    for (int a = 0; a <= k; ++a) row += vx[a] * coeff(k * ci + a, k * cj + b);
    s += vy[b] * row;
  }
  return s;
}

std::array<double, 2> FemFunction::grad(double x, double y) const {
  const int k = degree;
  const int ci = locate(mesh.x.points, x);
  const int cj = locate(mesh.y.points, y);
  const double hx = mesh.x.steps[ci];
  const double hy = mesh.y.steps[cj];
  const double tx = (x - mesh.x.points[ci]) / hx;
  const double ty = (y - mesh.y.points[cj]) / hy;
  const BasisSet basis(k);
  double vx[kMaxDegree + 1], dx[kMaxDegree + 1];
  double vy[kMaxDegree + 1], dy[kMaxDegree + 1];
  basis.eval(std::clamp(tx, 0.0, 1.0), {vx, vx + k + 1}, {dx, dx + k + 1});
  basis.eval(std::clamp(ty, 0.0, 1.0), {vy, vy + k + 1}, {dy, dy + k + 1});
  double gx = 0.0, gy = 0.0;
  for (int b = 0; b <= k; ++b) {
    for (int a = 0; a <= k; ++a) {
      const double c = coeff(k * ci + a, k * cj + b);
      gx += c * dx[a] / hx * vy[b];
      gy += c * vx[a] * dy[b] / hy;
    }
  }
  return {gx, gy};
}

FemFunction interpolate_standard(const Field& g, const TensorMesh2D& mesh,
                                 int degree) {
  const DofMap dof = build_dof_map(mesh, degree);
  FemFunction fn;
  fn.mesh = mesh;
  fn.degree = degree;
  const int n1 = dof.nodes_per_dir();
  fn.coeffs.resize(dof.node_count());
  for (int iy = 0; iy < n1; ++iy) {
    for (int ix = 0; ix < n1; ++ix) {
      fn.coeffs[dof.node_id(ix, iy)] = g(dof.coord_x[ix], dof.coord_y[iy]);
    }
  }
  return fn;
}

PiSpec make_pi_spec(int cells, int degree) {
  if (cells < 4 || cells % 2 != 0) {
    throw std::invalid_argument("pi_spec: cells must be even and >= 4");
  }
  PiSpec spec;
  const int base = degree * (cells / 2 - 1);
  for (int s = 0; s < degree; ++s) {
    spec.x_lines.push_back(base + s);
    spec.y_lines.push_back(base + s);
  }
  return spec;
}

FemFunction interpolate_pi(const SolutionDecomposition& dec,
                           const TensorMesh2D& mesh, int degree) {
  const int n = mesh.cells_per_dir();
  const PiSpec spec = make_pi_spec(n, degree);

  FemFunction s_i = interpolate_standard(dec.S, mesh, degree);
  FemFunction e1 = interpolate_standard(dec.E1, mesh, degree);
  FemFunction e2 = interpolate_standard(dec.E2, mesh, degree);
  FemFunction e12 = interpolate_standard(dec.E12, mesh, degree);

  const int n1 = s_i.nodes_per_dir();
  // Zero the layer components on the strip lines; the sets avoid the
  // boundary, so the boundary telescoping S + E1 + E2 + E12 = u = 0 survives.
  for (int ix : spec.x_lines) {
    for (int iy = 1; iy < n1 - 1; ++iy) e1.coeff(ix, iy) = 0.0;
  }
  for (int iy : spec.y_lines) {
    for (int ix = 1; ix < n1 - 1; ++ix) e2.coeff(ix, iy) = 0.0;
  }
  for (int ix : spec.x_lines) {
    for (int iy : spec.y_lines) e12.coeff(ix, iy) = 0.0;
  }

  FemFunction pi = std::move(s_i);
  for (long i = 0; i < static_cast<long>(pi.coeffs.size()); ++i) {
    pi.coeffs[i] += e1.coeffs[i] + e2.coeffs[i] + e12.coeffs[i];
  }
  // Members of the discrete space satisfy the homogeneous boundary condition
  // exactly; the unmasked sum above is zero there up to roundoff.
  for (int ix = 0; ix < n1; ++ix) {
    pi.coeff(ix, 0) = 0.0;
    pi.coeff(ix, n1 - 1) = 0.0;
  }
  for (int iy = 0; iy < n1; ++iy) {
    pi.coeff(0, iy) = 0.0;
    pi.coeff(n1 - 1, iy) = 0.0;
  }
  return pi;
}

FemFunction lift_interior(const SparseSystem& sys,
                          std::span<const double> interior) {
  if (static_cast<long>(interior.size()) != sys.n) {
    throw std::invalid_argument("lift_interior: dimension mismatch");
  }
  const DofMap& dof = sys.dof_map;
  FemFunction fn;
  fn.degree = dof.degree;
  // The dof map does not carry the mesh; rebuild it from the cell corners,
  // which the per-direction coordinates store exactly.
  for (int i = 0; i <= dof.cells; ++i) {
    fn.mesh.x.points.push_back(dof.coord_x[static_cast<std::size_t>(i) * dof.degree]);
    fn.mesh.y.points.push_back(dof.coord_y[static_cast<std::size_t>(i) * dof.degree]);
  }
  fn.mesh.x.steps.resize(dof.cells);
  fn.mesh.y.steps.resize(dof.cells);
  for (int i = 0; i < dof.cells; ++i) {
    fn.mesh.x.steps[i] = fn.mesh.x.points[i + 1] - fn.mesh.x.points[i];
    fn.mesh.y.steps[i] = fn.mesh.y.points[i + 1] - fn.mesh.y.points[i];
  }
  fn.coeffs.assign(dof.node_count(), 0.0);
  const int n1 = dof.nodes_per_dir();
  for (int iy = 1; iy < n1 - 1; ++iy) {
    for (int ix = 1; ix < n1 - 1; ++ix) {
      fn.coeffs[dof.node_id(ix, iy)] = interior[dof.interior_index(ix, iy)];
    }
  }
  return fn;
}

double StabilityReport::worst() const {
  return std::max({e1.worst_standard, e1.worst_masked, e2.worst_standard,
                   e2.worst_masked, e12.worst_standard, e12.worst_masked});
}

StabilityReport interp_stability_check(const SolutionDecomposition& dec,
                                       const TensorMesh2D& mesh, int degree,
                                       int samples) {
  if (samples < 2) {
    throw std::invalid_argument("stability check: samples must be >= 2");
  }
  const int n = mesh.cells_per_dir();

  struct Component {
    const Field* f;
    FemFunction standard;
    FemFunction masked;
    StabilityReport::Entry* out;
  };

  StabilityReport report;
  FemFunction e1 = interpolate_standard(dec.E1, mesh, degree);
  FemFunction e2 = interpolate_standard(dec.E2, mesh, degree);
  FemFunction e12 = interpolate_standard(dec.E12, mesh, degree);
  FemFunction e1m = e1, e2m = e2, e12m = e12;
  const PiSpec spec = make_pi_spec(n, degree);
  const int n1 = e1.nodes_per_dir();
  for (int ix : spec.x_lines) {
    for (int iy = 1; iy < n1 - 1; ++iy) e1m.coeff(ix, iy) = 0.0;
  }
  for (int iy : spec.y_lines) {
    for (int ix = 1; ix < n1 - 1; ++ix) e2m.coeff(ix, iy) = 0.0;
  }
  for (int ix : spec.x_lines) {
    for (int iy : spec.y_lines) e12m.coeff(ix, iy) = 0.0;
  }

  std::vector<Component> comps = {
      {&dec.E1, std::move(e1), std::move(e1m), &report.e1},
      {&dec.E2, std::move(e2), std::move(e2m), &report.e2},
      {&dec.E12, std::move(e12), std::move(e12m), &report.e12},
  };

  const int dense = 2 * samples;
  for (auto& comp : comps) {
    double worst_std = 0.0, worst_mask = 0.0;
    for (int cj = 0; cj < n; ++cj) {
      for (int ci = 0; ci < n; ++ci) {
        const double x0 = mesh.x.points[ci], hx = mesh.x.steps[ci];
        const double y0 = mesh.y.points[cj], hy = mesh.y.steps[cj];
        double max_interp_std = 0.0, max_interp_mask = 0.0, max_exact = 0.0;
        for (int sy = 0; sy < samples; ++sy) {
          const double y = y0 + hy * sy / (samples - 1);
          for (int sx = 0; sx < samples; ++sx) {
            const double x = x0 + hx * sx / (samples - 1);
            max_interp_std =
                std::max(max_interp_std, std::abs(comp.standard.eval(x, y)));
            max_interp_mask =
                std::max(max_interp_mask, std::abs(comp.masked.eval(x, y)));
          }
        }
        for (int sy = 0; sy < dense; ++sy) {
          const double y = y0 + hy * sy / (dense - 1);
          for (int sx = 0; sx < dense; ++sx) {
            const double x = x0 + hx * sx / (dense - 1);
            max_exact = std::max(max_exact, std::abs((*comp.f)(x, y)));
          }
        }
        if (max_exact > 0.0) {
          worst_std = std::max(worst_std, max_interp_std / max_exact);
          worst_mask = std::max(worst_mask, max_interp_mask / max_exact);
        }
      }
    }
    comp.out->worst_standard = worst_std;
    comp.out->worst_masked = worst_mask;
  }
  return report;
}

}  // namespace bakhfem
