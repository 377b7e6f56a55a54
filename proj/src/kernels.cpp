#include "bakhfem/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

#include "kernels_detail.hpp"

namespace bakhfem::kernels {
namespace {

struct State {
  Backend selected = Backend::Auto;
  const detail::Ops* ops = nullptr;
  Backend resolved = Backend::Scalar;
};

State& state() {
  static State s;
  return s;
}

void resolve(State& s) {
  Backend want = s.selected;
  if (want == Backend::Auto) {
    if (const char* env = std::getenv("BAKHFEM_KERNELS")) {
      want = parse_backend(env);
    }
  }
#if defined(BAKHFEM_HAVE_AVX2)
  const bool have_avx2 = detail::avx2_supported();
  if (want == Backend::Avx2 || want == Backend::Auto) {
    if (have_avx2) {
      s.ops = &detail::avx2_ops;
      s.resolved = Backend::Avx2;
      return;
    }
  }
#endif
  s.ops = &detail::scalar_ops;
  s.resolved = Backend::Scalar;
}

const detail::Ops& ops() {
  State& s = state();
  if (!s.ops) resolve(s);
  return *s.ops;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernels: size mismatch");
}

}  // namespace

void select_backend(Backend b) {
  State& s = state();
  s.selected = b;
  s.ops = nullptr;
  resolve(s);
}

Backend active_backend() {
  State& s = state();
  if (!s.ops) resolve(s);
  return s.resolved;
}

std::string backend_name() {
  switch (active_backend()) {
    case Backend::Avx2: return "avx2";
    case Backend::Scalar: return "scalar";
    default: return "auto";
  }
}

Backend parse_backend(const std::string& name) {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  if (name == "auto") return Backend::Auto;
  throw std::invalid_argument("unknown kernel backend: " + name);
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size());
  return ops().dot(x.data(), y.data(), x.size());
}

double nrm2(std::span<const double> x) {
  return ops().nrm2(x.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  ops().axpy(a, x.data(), y.data(), x.size());
}

void scal(double a, std::span<double> x) { ops().scal(a, x.data(), x.size()); }

void csr_matvec(std::span<const long> row_ptr, std::span<const int> col,
                std::span<const double> val, std::span<const double> x,
                std::span<double> y) {
  const std::size_t n = y.size();
  if (row_ptr.size() != n + 1) {
    throw std::invalid_argument("csr_matvec: row_ptr size mismatch");
  }
  ops().csr_matvec(row_ptr.data(), col.data(), val.data(), x.data(), y.data(),
                   n);
}

}  // namespace bakhfem::kernels
