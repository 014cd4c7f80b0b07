#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace dostrace::dense {

// Dense symmetric/Hermitian eigensolvers and SVDs. Backed by LAPACKE when the
// build finds it (the N=4096 paths need a blocked dsyevd), Eigen otherwise.

// Eigenvalues only, ascending.
std::vector<double> sym_eigenvalues(Eigen::MatrixXd A);

struct SymEig {
    std::vector<double> values;  // ascending
    Eigen::MatrixXd vectors;     // columns
};
SymEig sym_eigen(Eigen::MatrixXd A);

std::vector<double> herm_eigenvalues(Eigen::MatrixXcd A);

struct HermEig {
    std::vector<double> values;
    Eigen::MatrixXcd vectors;
};
HermEig herm_eigen(Eigen::MatrixXcd A);

// Singular values, descending.
std::vector<double> singular_values(const Eigen::MatrixXd& A);
std::vector<double> singular_values(const Eigen::MatrixXcd& A);

}  // namespace dostrace::dense
