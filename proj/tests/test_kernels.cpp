#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "bakhfem/kernels.hpp"

using namespace bakhfem;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// Small random CSR matrix plus its dense image.
struct TestMatrix {
  long n;
  std::vector<long> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> dense;
};

TestMatrix random_csr(long n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_int_distribution<int> nnz_dist(1, 9);
  TestMatrix m;
  m.n = n;
  m.dense.assign(n * n, 0.0);
  m.row_ptr.push_back(0);
  for (long i = 0; i < n; ++i) {
    const int row_nnz = nnz_dist(rng);
    std::vector<int> cols;
    std::uniform_int_distribution<int> cdist(0, static_cast<int>(n) - 1);
    for (int t = 0; t < row_nnz; ++t) cols.push_back(cdist(rng));
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (int c : cols) {
      const double v = dist(rng);
      m.col.push_back(c);
      m.val.push_back(v);
      m.dense[i * n + c] = v;
    }
    m.row_ptr.push_back(static_cast<long>(m.col.size()));
  }
  return m;
}

}  // namespace

TEST_CASE("scalar and avx2 variants agree") {
  const auto x = random_vec(1003, 17);
  const auto y = random_vec(1003, 23);

  kernels::select_backend(kernels::Backend::Scalar);
  const double dot_s = kernels::dot(x, y);
  const double nrm_s = kernels::nrm2(x);
  auto axpy_s = y;
  kernels::axpy(0.37, x, axpy_s);

  kernels::select_backend(kernels::Backend::Avx2);
  if (kernels::active_backend() != kernels::Backend::Avx2) {
    kernels::select_backend(kernels::Backend::Auto);
    return; // no AVX2 on this machine
  }
  const double dot_v = kernels::dot(x, y);
  const double nrm_v = kernels::nrm2(x);
  auto axpy_v = y;
  kernels::axpy(0.37, x, axpy_v);
  kernels::select_backend(kernels::Backend::Auto);

  CHECK(dot_s == doctest::Approx(dot_v).epsilon(1e-13));
  CHECK(nrm_s == doctest::Approx(nrm_v).epsilon(1e-13));
  for (std::size_t i = 0; i < axpy_s.size(); ++i) {
    CHECK(axpy_s[i] == doctest::Approx(axpy_v[i]).epsilon(1e-14));
  }
}

TEST_CASE("csr matvec matches a dense product on both backends") {
  const TestMatrix m = random_csr(57, 5);
  const auto x = random_vec(m.n, 99);
  std::vector<double> expect(m.n, 0.0);
  for (long i = 0; i < m.n; ++i) {
    for (long j = 0; j < m.n; ++j) expect[i] += m.dense[i * m.n + j] * x[j];
  }
  for (auto backend : {kernels::Backend::Scalar, kernels::Backend::Avx2}) {
    kernels::select_backend(backend);
    std::vector<double> y(m.n, -1.0);
    kernels::csr_matvec(m.row_ptr, m.col, m.val, x, y);
    for (long i = 0; i < m.n; ++i) {
      CHECK(y[i] == doctest::Approx(expect[i]).epsilon(1e-13));
    }
  }
  kernels::select_backend(kernels::Backend::Auto);
}

TEST_CASE("a fixed backend is bitwise deterministic") {
  const auto x = random_vec(511, 3);
  const auto y = random_vec(511, 7);
  const double d1 = kernels::dot(x, y);
  const double d2 = kernels::dot(x, y);
  CHECK(std::memcmp(&d1, &d2, sizeof d1) == 0);
}

TEST_CASE("backend parsing and size checks") {
  CHECK(kernels::parse_backend("scalar") == kernels::Backend::Scalar);
  CHECK(kernels::parse_backend("avx2") == kernels::Backend::Avx2);
  CHECK(kernels::parse_backend("auto") == kernels::Backend::Auto);
  CHECK_THROWS_AS((void)kernels::parse_backend("sse9"), std::invalid_argument);
  const std::vector<double> a(4, 1.0), b(5, 1.0);
  CHECK_THROWS_AS((void)kernels::dot(a, b), std::invalid_argument);
}
