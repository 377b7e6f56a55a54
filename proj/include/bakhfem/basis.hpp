#pragma once

#include <span>
#include <vector>

#include "bakhfem/quadrature.hpp"

namespace bakhfem {

inline constexpr int kMaxDegree = 10;

// Degree-k Lagrange nodal basis on the k+1 equispaced reference nodes
// {0, 1/k, ..., 1}.
struct BasisSet {
  int degree;
  std::vector<double> ref_nodes;

  explicit BasisSet(int k);

  int size() const { return degree + 1; }

  // Cardinal function values and first derivatives at t in [0,1].
  // values/derivs must have size() entries. Throws for t outside [0,1].
  void eval(double t, std::span<double> values, std::span<double> derivs) const;
};

// Basis values/derivatives tabulated at the points of a quadrature rule.
// val[q*nb + m], der[q*nb + m] for quadrature point q and basis function m.
struct BasisTable {
  int q = 0;
  int nb = 0;
  std::vector<double> val;
  std::vector<double> der;

  const double* values_at(int iq) const { return val.data() + iq * nb; }
  const double* derivs_at(int iq) const { return der.data() + iq * nb; }
};

BasisTable tabulate(const BasisSet& basis, const QuadRule& rule);

}  // namespace bakhfem
