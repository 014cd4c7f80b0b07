#include "dostrace/kernels.hpp"

namespace dostrace::kernels {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void cheb_combine_scalar(double a, const double* av, double b, const double* v,
                         double* inout, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) inout[i] = a * av[i] + b * v[i] - inout[i];
}

void spmv_csr_scalar(const std::int64_t* rowptr, const std::int32_t* col,
                     const double* val, const double* x, double* y,
                     std::int64_t nrows) {
    for (std::int64_t r = 0; r < nrows; ++r) {
        double acc = 0.0;
        for (std::int64_t k = rowptr[r]; k < rowptr[r + 1]; ++k)
            acc += val[k] * x[col[k]];
        y[r] = acc;
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {dot_scalar, sum_scalar, axpy_scalar, scal_scalar,
                            cheb_combine_scalar, spmv_csr_scalar, "scalar"};
    return ops;
}

}  // namespace dostrace::kernels
