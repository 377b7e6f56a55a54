#pragma once

#include <cstddef>
#include <span>
#include <string>

// Runtime-dispatched dense/sparse kernels. A scalar reference implementation
// is always available; an AVX2 variant is selected at startup on x86-64 CPUs
// that support it. The two variants agree to rounding (different summation
// order), and a fixed selection is deterministic run-to-run.
namespace bakhfem::kernels {

enum class Backend { Auto, Scalar, Avx2 };

// Sticky selection. Auto probes CPU support once. Selecting Avx2 on an
// unsupported CPU silently falls back to Scalar.
void select_backend(Backend b);
Backend active_backend();
std::string backend_name();
Backend parse_backend(const std::string& name);

double dot(std::span<const double> x, std::span<const double> y);
double nrm2(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scal(double a, std::span<double> x);

// y = A*x for a CSR matrix with long row pointers and int column indices.
void csr_matvec(std::span<const long> row_ptr, std::span<const int> col,
                std::span<const double> val, std::span<const double> x,
                std::span<double> y);

}  // namespace bakhfem::kernels
