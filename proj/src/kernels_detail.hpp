#pragma once

#include <cstddef>

namespace bakhfem::kernels::detail {

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*csr_matvec)(const long*, const int*, const double*, const double*,
                     double*, std::size_t);
};

extern const Ops scalar_ops;

#if defined(BAKHFEM_HAVE_AVX2)
extern const Ops avx2_ops;
bool avx2_supported();
#endif

}  // namespace bakhfem::kernels::detail
