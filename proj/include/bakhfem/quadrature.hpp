#pragma once

#include <vector>

namespace bakhfem {

// Gauss-Legendre rule on the reference interval [0,1].
struct QuadRule {
  std::vector<double> points;
  std::vector<double> weights;

  int count() const { return static_cast<int>(points.size()); }
};

// Exact for polynomials of degree <= 2q-1. 1 <= q <= 16.
QuadRule gauss_rule(int q);

}  // namespace bakhfem
