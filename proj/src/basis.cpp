#include "bakhfem/basis.hpp"

#include <stdexcept>

namespace bakhfem {

BasisSet::BasisSet(int k) : degree(k) {
  if (k < 1 || k > kMaxDegree) {
    throw std::invalid_argument("basis: degree must lie in [1, 10]");
  }
  ref_nodes.resize(k + 1);
  for (int m = 0; m <= k; ++m) {
    ref_nodes[m] = static_cast<double>(m) / k;
  }
}

void BasisSet::eval(double t, std::span<double> values,
                    std::span<double> derivs) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("basis: t outside [0, 1]");
  }
  const int nb = size();
  for (int m = 0; m < nb; ++m) {
    double v = 1.0;
    for (int j = 0; j < nb; ++j) {
      if (j == m) continue;
      v *= (t - ref_nodes[j]) / (ref_nodes[m] - ref_nodes[j]);
    }
    values[m] = v;

    // d/dt of the cardinal product: sum over the factor being differentiated.
    double d = 0.0;
    for (int l = 0; l < nb; ++l) {
      if (l == m) continue;
      double term = 1.0 / (ref_nodes[m] - ref_nodes[l]);
      for (int j = 0; j < nb; ++j) {
        if (j == m || j == l) continue;
        term *= (t - ref_nodes[j]) / (ref_nodes[m] - ref_nodes[j]);
      }
      d += term;
    }
    derivs[m] = d;
  }
}

BasisTable tabulate(const BasisSet& basis, const QuadRule& rule) {
  BasisTable table;
  table.q = rule.count();
  table.nb = basis.size();
  table.val.resize(static_cast<std::size_t>(table.q) * table.nb);
  table.der.resize(table.val.size());
  for (int iq = 0; iq < table.q; ++iq) {
    basis.eval(rule.points[iq],
               std::span(table.val).subspan(iq * table.nb, table.nb),
               std::span(table.der).subspan(iq * table.nb, table.nb));
  }
  return table;
}

}  // namespace bakhfem
