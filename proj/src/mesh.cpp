#include "bakhfem/mesh.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bakhfem {

void MeshConfig::validate() const {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("mesh: n must be even and >= 4");
  }
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("mesh: epsilon must lie in (0, 1)");
  }
  if (!allow_large_eps && epsilon > 1.0 / n) {
    throw std::invalid_argument(
        "mesh: epsilon > 1/n violates the mesh assumption "
        "(pass allow_large_eps to override)");
  }
  if (!(sigma >= 1.0)) {
    throw std::invalid_argument("mesh: sigma must be >= 1");
  }
  if (!(beta > 0.0)) {
    throw std::invalid_argument("mesh: beta must be positive");
  }
  // The transition point must leave room for the uniform half.
  const double transition = -(sigma * epsilon / beta) * std::log(epsilon);
  if (!(transition < 1.0)) {
    throw std::invalid_argument(
        "mesh: transition point -(sigma*eps/beta)*ln(eps) reaches 1; "
        "reduce sigma/eps or increase beta");
  }
}

Mesh1D bakhvalov_points(const MeshConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const double eps = cfg.epsilon;
  const double scale = cfg.sigma * eps / cfg.beta;

  Mesh1D mesh;
  mesh.points.resize(n + 1);
  // 1 - 2(1-eps)i/N rewritten as ((N-2i) + 2*eps*i)/N: no cancellation, and
  // the argument reduces to exactly eps at i = N/2.
  for (int i = 0; i <= n / 2; ++i) {
    const double t = (static_cast<double>(n - 2 * i) + 2.0 * eps * i) / n;
    mesh.points[i] = -scale * std::log(t);
  }
  mesh.points[0] = 0.0; // not -0.0

  const double xm = mesh.points[n / 2];
  // Closed form keeps x_N = 1 exact.
  for (int i = n / 2 + 1; i <= n; ++i) {
    mesh.points[i] = 1.0 - 2.0 * (1.0 - xm) * static_cast<double>(n - i) / n;
  }

  mesh.steps.resize(n);
  for (int i = 0; i < n; ++i) {
    mesh.steps[i] = mesh.points[i + 1] - mesh.points[i];
    if (!(mesh.steps[i] > 0.0)) {
      throw std::runtime_error("mesh: points are not strictly increasing");
    }
  }
  return mesh;
}

TensorMesh2D tensor_mesh(const MeshConfig& cfg_x, const MeshConfig& cfg_y) {
  if (cfg_x.n != cfg_y.n) {
    throw std::invalid_argument("tensor_mesh: configs must share n");
  }
  return {bakhvalov_points(cfg_x), bakhvalov_points(cfg_y)};
}

MeshReport mesh_report(const Mesh1D& mesh, const MeshConfig& cfg) {
  const int n = mesh.cells();
  MeshReport r;
  r.h0_over_eps_n = mesh.steps[0] / (cfg.epsilon / n);
  r.fine_monotone = true;
  for (int i = 0; i + 1 <= n / 2 - 2; ++i) {
    if (mesh.steps[i] > mesh.steps[i + 1]) {
      r.fine_monotone = false;
      break;
    }
  }
  r.coarse_min = r.coarse_max = mesh.steps[n / 2] * n;
  for (int i = n / 2; i < n; ++i) {
    const double h = mesh.steps[i] * n;
    r.coarse_min = std::min(r.coarse_min, h);
    r.coarse_max = std::max(r.coarse_max, h);
  }
  r.transition = mesh.points[n / 2];
  r.layer_width =
      std::pow(cfg.epsilon + 2.0 * (1.0 - cfg.epsilon) / n, cfg.sigma);
  return r;
}

void dump_points(const Mesh1D& mesh, std::ostream& out) {
  char buf[64];
  for (std::size_t i = 0; i < mesh.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.17g\n", i, mesh.points[i]);
    out << buf;
  }
}

std::string format_report(const MeshReport& r) {
  std::ostringstream os;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-18s %.17g\n", "h0_over_eps_n:", r.h0_over_eps_n);
  os << buf;
  std::snprintf(buf, sizeof buf, "%-18s %s\n", "fine_monotone:",
                r.fine_monotone ? "true" : "false");
  os << buf;
  std::snprintf(buf, sizeof buf, "%-18s %.17g\n", "coarse_min:", r.coarse_min);
  os << buf;
  std::snprintf(buf, sizeof buf, "%-18s %.17g\n", "coarse_max:", r.coarse_max);
  os << buf;
  std::snprintf(buf, sizeof buf, "%-18s %.17g\n", "transition:", r.transition);
  os << buf;
  std::snprintf(buf, sizeof buf, "%-18s %.17g\n", "layer_width:", r.layer_width);
  os << buf;
  return os.str();
}

}  // namespace bakhfem
