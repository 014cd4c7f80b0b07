#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dostrace/kernels.hpp"
#include "dostrace/rng.hpp"

using namespace dostrace;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t stream) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = rng::uniform(42, stream, i) * 2.0 - 1.0;
    return v;
}

// CSR of a random banded matrix.
struct TestCsr {
    std::vector<std::int64_t> rowptr;
    std::vector<std::int32_t> col;
    std::vector<double> val;
    std::int64_t n;
};

TestCsr random_banded(std::int64_t n, int band, std::uint64_t stream) {
    TestCsr m;
    m.n = n;
    m.rowptr.push_back(0);
    for (std::int64_t r = 0; r < n; ++r) {
        for (int d = -band; d <= band; ++d) {
            std::int64_t c = r + d;
            if (c < 0 || c >= n) continue;
            m.col.push_back(static_cast<std::int32_t>(c));
            m.val.push_back(rng::uniform(9, stream, static_cast<std::uint64_t>(r * 17 + d + band)) - 0.5);
        }
        m.rowptr.push_back(static_cast<std::int64_t>(m.col.size()));
    }
    return m;
}

}  // namespace

TEST_CASE("scalar and simd backends agree to rounding") {
    const auto& sc = kernels::scalar_ops();
#if defined(__x86_64__)
    if (!__builtin_cpu_supports("avx2")) return;
    const auto& vec = kernels::avx2_ops();
#else
    const auto& vec = kernels::scalar_ops();
#endif
    for (std::size_t n : {1u, 3u, 5u, 16u, 63u, 256u, 1001u, 4096u}) {
        auto x = random_vec(n, n);
        auto y = random_vec(n, n + 1);

        double d1 = sc.dot(x.data(), y.data(), n);
        double d2 = vec.dot(x.data(), y.data(), n);
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-13));

        double s1 = sc.sum(x.data(), n);
        double s2 = vec.sum(x.data(), n);
        CHECK(s1 == doctest::Approx(s2).epsilon(1e-13));

        auto y1 = y, y2 = y;
        sc.axpy(0.37, x.data(), y1.data(), n);
        vec.axpy(0.37, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

        auto z1 = x, z2 = x;
        sc.scal(-1.25, z1.data(), n);
        vec.scal(-1.25, z2.data(), n);
        CHECK(z1 == z2);  // multiplication by a constant is exact either way

        auto io1 = random_vec(n, n + 2), io2 = io1;
        sc.cheb_combine(1.7, x.data(), -0.3, y.data(), io1.data(), n);
        vec.cheb_combine(1.7, x.data(), -0.3, y.data(), io2.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(io1[i] == doctest::Approx(io2[i]).epsilon(1e-14));
    }
}

TEST_CASE("spmv agrees between backends and a plain reference") {
    const auto& sc = kernels::scalar_ops();
#if defined(__x86_64__)
    if (!__builtin_cpu_supports("avx2")) return;
    const auto& vec = kernels::avx2_ops();
#else
    const auto& vec = kernels::scalar_ops();
#endif
    for (std::int64_t n : {1, 7, 64, 513}) {
        for (int band : {1, 3, 9}) {
            auto m = random_banded(n, band, static_cast<std::uint64_t>(n * band));
            auto x = random_vec(static_cast<std::size_t>(n), 77);
            std::vector<double> y1(n), y2(n), yref(n);
            sc.spmv_csr(m.rowptr.data(), m.col.data(), m.val.data(), x.data(), y1.data(), n);
            vec.spmv_csr(m.rowptr.data(), m.col.data(), m.val.data(), x.data(), y2.data(), n);
            for (std::int64_t r = 0; r < n; ++r) {
                long double acc = 0.0L;
                for (std::int64_t k = m.rowptr[r]; k < m.rowptr[r + 1]; ++k)
                    acc += (long double)m.val[k] * x[m.col[k]];
                yref[r] = static_cast<double>(acc);
            }
            for (std::int64_t r = 0; r < n; ++r) {
                CHECK(y1[r] == doctest::Approx(yref[r]).epsilon(1e-12));
                CHECK(y2[r] == doctest::Approx(yref[r]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("backend selection") {
    kernels::force_backend("scalar");
    CHECK(kernels::active_name() == "scalar");
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) {
        kernels::force_backend("avx2");
        CHECK(kernels::active_name() == "avx2");
    }
#endif
    kernels::force_backend("auto");
    CHECK_THROWS(kernels::force_backend("sse999"));
}
