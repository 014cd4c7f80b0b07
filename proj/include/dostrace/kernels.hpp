#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace dostrace::kernels {

// Hot inner loops behind the spectral code: dense vector arithmetic for the
// Chebyshev recurrences and CSR matvec. Scalar reference implementations are
// the semantic ground truth; the AVX2 variants are selected at runtime when
// the CPU supports them and must agree with the reference to rounding
// (equivalence-tested in tests/test_kernels.cpp).
struct Ops {
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    void (*scal)(double a, double* x, std::size_t n);
    // inout[i] = a*av[i] + b*v[i] - inout[i]  (three-term Chebyshev update)
    void (*cheb_combine)(double a, const double* av, double b, const double* v,
                         double* inout, std::size_t n);
    void (*spmv_csr)(const std::int64_t* rowptr, const std::int32_t* col,
                     const double* val, const double* x, double* y,
                     std::int64_t nrows);
    const char* name;
};

const Ops& scalar_ops();
#if defined(__x86_64__)
const Ops& avx2_ops();
#endif

// Active backend: picked once from CPU features, overridable via
// DOSTRACE_KERNELS=scalar|avx2 or force_backend().
const Ops& active();
void force_backend(const std::string& name);  // throws on unknown/unsupported
std::string active_name();

}  // namespace dostrace::kernels
