#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "dostrace/kernels.hpp"

namespace dostrace::sparse {

// Compressed-row storage. Rows/cols int32-indexed (desk scale), rowptr int64.
template <typename T>
struct Csr {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<std::int64_t> rowptr;  // rows+1
    std::vector<std::int32_t> colidx;
    std::vector<T> values;

    std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

    void multiply(const T* x, T* y) const {
        for (std::int64_t r = 0; r < rows; ++r) {
            T acc{};
            for (std::int64_t k = rowptr[r]; k < rowptr[r + 1]; ++k)
                acc += values[k] * x[colidx[k]];
            y[r] = acc;
        }
    }
};

// double specialization routes through the dispatched kernels
template <>
inline void Csr<double>::multiply(const double* x, double* y) const {
    kernels::active().spmv_csr(rowptr.data(), colidx.data(), values.data(), x, y,
                               rows);
}

// Coordinate-style builder; duplicate entries are summed.
template <typename T>
class Builder {
  public:
    Builder(std::int64_t rows, std::int64_t cols) : rows_(rows), cols_(cols) {}
    void add(std::int64_t r, std::int64_t c, T v) { entries_[{r, c}] += v; }
    Csr<T> build() const {
        Csr<T> m;
        m.rows = rows_;
        m.cols = cols_;
        m.rowptr.assign(rows_ + 1, 0);
        for (const auto& [rc, v] : entries_) m.rowptr[rc.first + 1]++;
        for (std::int64_t r = 0; r < rows_; ++r) m.rowptr[r + 1] += m.rowptr[r];
        m.colidx.resize(entries_.size());
        m.values.resize(entries_.size());
        std::size_t i = 0;
        for (const auto& [rc, v] : entries_) {  // map iterates row-major sorted
            m.colidx[i] = static_cast<std::int32_t>(rc.second);
            m.values[i] = v;
            ++i;
        }
        return m;
    }

  private:
    std::int64_t rows_, cols_;
    std::map<std::pair<std::int64_t, std::int64_t>, T> entries_;
};

using CsrReal = Csr<double>;
using CsrComplex = Csr<std::complex<double>>;

}  // namespace dostrace::sparse
