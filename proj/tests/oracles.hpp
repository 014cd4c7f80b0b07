#pragma once

// Independent reference computations for the test suites. Everything here is
// deliberately computed by a different route than the library code it checks
// (direct summation, closed forms, enumeration, dense reference algebra).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracles {

// (1/N) sum_k exp(-t (2 - 2 cos(2 pi k / N))): heat diagonal of the periodic
// d=1 lattice Laplacian.
inline double dft_heat_diag(std::int64_t N, double t) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < N; ++k)
        acc += std::exp(-t * (2.0 - 2.0 * std::cos(2.0 * M_PI * k / N)));
    return acc / static_cast<double>(N);
}

// Large-N limit of the same quantity.
inline double free_chain_heat_limit(double t) {
    return std::exp(-2.0 * t) * std::cyl_bessel_i(0.0, 2.0 * t);
}

// Spectral density of the d=1 free lattice Laplacian on [0,4].
inline double rho1(double lam) {
    return 1.0 / (M_PI * std::sqrt(lam * (4.0 - lam)));
}
// Its CDF.
inline double rho1_cdf(double lam) {
    lam = std::min(std::max(lam, 0.0), 4.0);
    return 0.5 + std::asin((lam - 2.0) / 2.0) / M_PI;
}

// Direct summation of sum_{k=0}^{N-1} f(k) in long double.
template <typename F>
long double direct_sum(std::int64_t N, F f) {
    long double acc = 0.0L;
    for (std::int64_t k = 0; k < N; ++k) acc += f(k);
    return acc;
}

// Reference zeta by direct summation plus integral remainder (independent of
// the Euler-Maclaurin code under test).
inline double zeta_ref(double s, std::int64_t terms = 2000000) {
    long double acc = 0.0L;
    for (std::int64_t k = 1; k <= terms; ++k) acc += std::pow((long double)k, -s);
    acc += std::pow((long double)terms, 1.0L - s) / (s - 1.0L) -
           0.5L * std::pow((long double)terms, (long double)-s);
    return static_cast<double>(acc);
}

// Dense reference matvec / heat action via Eigen's eigensolver (the library's
// Chebyshev path never sees this code).
inline Eigen::MatrixXd dense_heat(const Eigen::MatrixXd& P, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    return es.eigenvectors() *
           (-t * es.eigenvalues().array()).exp().matrix().asDiagonal() *
           es.eigenvectors().transpose();
}

// Eigenvalues of the N-site Dirichlet chain Laplacian: 2 - 2 cos(k pi/(N+1)).
inline std::vector<double> dirichlet_chain_eigs(int N) {
    std::vector<double> v(N);
    for (int k = 1; k <= N; ++k)
        v[k - 1] = 2.0 - 2.0 * std::cos(k * M_PI / (N + 1.0));
    return v;
}

// Integer points with x^2+y^2 <= R^2 (enumeration oracle).
inline std::int64_t disc_count(double R) {
    std::int64_t r = static_cast<std::int64_t>(std::floor(R)) + 1;
    std::int64_t count = 0;
    for (std::int64_t x = -r; x <= r; ++x)
        for (std::int64_t y = -r; y <= r; ++y)
            if (x * x + y * y <= R * R + 1e-9) ++count;
    return count;
}

}  // namespace oracles
