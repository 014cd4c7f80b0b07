#include "dostrace/dense.hpp"

#include <stdexcept>

#if defined(DOSTRACE_HAVE_LAPACKE)
#include <lapacke.h>
#endif

namespace dostrace::dense {

#if defined(DOSTRACE_HAVE_LAPACKE)

std::vector<double> sym_eigenvalues(Eigen::MatrixXd A) {
    const auto n = static_cast<lapack_int>(A.rows());
    std::vector<double> w(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, A.data(), n,
                                     w.data());
    if (info != 0) throw std::runtime_error("dsyevd failed");
    return w;
}

SymEig sym_eigen(Eigen::MatrixXd A) {
    const auto n = static_cast<lapack_int>(A.rows());
    SymEig out;
    out.values.resize(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, A.data(), n,
                                     out.values.data());
    if (info != 0) throw std::runtime_error("dsyevd failed");
    out.vectors = std::move(A);
    return out;
}

std::vector<double> herm_eigenvalues(Eigen::MatrixXcd A) {
    const auto n = static_cast<lapack_int>(A.rows());
    std::vector<double> w(n);
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'N', 'L', n,
        reinterpret_cast<lapack_complex_double*>(A.data()), n, w.data());
    if (info != 0) throw std::runtime_error("zheevd failed");
    return w;
}

HermEig herm_eigen(Eigen::MatrixXcd A) {
    const auto n = static_cast<lapack_int>(A.rows());
    HermEig out;
    out.values.resize(n);
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(A.data()), n, out.values.data());
    if (info != 0) throw std::runtime_error("zheevd failed");
    out.vectors = std::move(A);
    return out;
}

std::vector<double> singular_values(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd work = A;
    const auto m = static_cast<lapack_int>(A.rows());
    const auto n = static_cast<lapack_int>(A.cols());
    std::vector<double> s(std::min(m, n));
    lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(),
                       nullptr, m, nullptr, n);
    if (info != 0) throw std::runtime_error("dgesdd failed");
    return s;
}

std::vector<double> singular_values(const Eigen::MatrixXcd& A) {
    Eigen::MatrixXcd work = A;
    const auto m = static_cast<lapack_int>(A.rows());
    const auto n = static_cast<lapack_int>(A.cols());
    std::vector<double> s(std::min(m, n));
    lapack_int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, 'N', m, n,
        reinterpret_cast<lapack_complex_double*>(work.data()), m, s.data(),
        nullptr, m, nullptr, n);
    if (info != 0) throw std::runtime_error("zgesdd failed");
    return s;
}

#else  // Eigen fallback

std::vector<double> sym_eigenvalues(Eigen::MatrixXd A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    return std::vector<double>(v.data(), v.data() + v.size());
}

SymEig sym_eigen(Eigen::MatrixXd A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    SymEig out;
    const auto& v = es.eigenvalues();
    out.values.assign(v.data(), v.data() + v.size());
    out.vectors = es.eigenvectors();
    return out;
}

std::vector<double> herm_eigenvalues(Eigen::MatrixXcd A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    return std::vector<double>(v.data(), v.data() + v.size());
}

HermEig herm_eigen(Eigen::MatrixXcd A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    HermEig out;
    const auto& v = es.eigenvalues();
    out.values.assign(v.data(), v.data() + v.size());
    out.vectors = es.eigenvectors();
    return out;
}

std::vector<double> singular_values(const Eigen::MatrixXd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

std::vector<double> singular_values(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

#endif

}  // namespace dostrace::dense
