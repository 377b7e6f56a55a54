#include "bakhfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bakhfem {
namespace {

// Legendre P_q and P_q' at interior x via the three-term recurrence.
void legendre(int q, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int j = 2; j <= q; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = q * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadRule gauss_rule(int q) {
  if (q < 1 || q > 16) {
    throw std::invalid_argument("gauss_rule: q must lie in [1, 16]");
  }
  QuadRule rule;
  rule.points.resize(q);
  rule.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    // Newton from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double p = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      legendre(q, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(q, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] -> [0,1]; store ascending.
    rule.points[q - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[q - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace bakhfem
