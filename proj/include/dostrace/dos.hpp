#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dostrace/lattice.hpp"
#include "dostrace/operators.hpp"
#include "dostrace/seq.hpp"

namespace dostrace::dos {

struct EstimatorResult {
    double value = 0.0;
    std::vector<std::pair<double, double>> approximants;  // (parameter, value)
    bool converged = false;
    std::string method;
    std::map<std::string, double> aux;  // diagnostics / witnesses
};

struct DOSMeasure {
    std::vector<double> bin_edges;  // nbins+1
    std::vector<double> masses;     // per-site normalized
    std::vector<std::pair<double, double>> laplace_samples;  // (t, int e^{-t l} dnu)
    std::map<std::string, std::string> metadata;
};

// l(R) = Tr(e^{-tP} M_{chi_B(R)}) / |B(R)|. Radii must increase and stay
// within box_min/2 - box_min/4 (guard band). value = mean of the last three
// approximants, converged iff their spread is < 1% relative.
EstimatorResult ball_average_heat_trace(const operators::SparseHermitianOperator& op,
                                        const lattice::LatticeGeometry& geom,
                                        double t, const std::vector<double>& radii);

// eps * Tr(e^{-tP} chi_{[eps,inf)}(M_w)) over the grid; every mask is checked
// against the matching ball indicator (aux["mask_identity"] = 1 when all
// coincide exactly).
EstimatorResult epsilon_formula(const operators::SparseHermitianOperator& op,
                                const lattice::LatticeGeometry& geom,
                                const lattice::WeightField& weights, double t,
                                const std::vector<double>& eps_grid);

// (s-1) Tr(e^{-tP} M_w^s) for s downward to 1, with the finite-box tail
// restored by the profile integral rho_hat (1+V(d_max))^{1-s}; Richardson
// extrapolation in (s-1). aux reports the largest correction fraction.
EstimatorResult s_limit_formula(const operators::SparseHermitianOperator& op,
                                const lattice::LatticeGeometry& geom,
                                const lattice::WeightField& weights, double t,
                                std::vector<double> s_grid);

// Eigenvalues of M_w^{1/2} e^{-tP} M_w^{1/2} (same nonzero spectrum as
// e^{-tP} M_w, numerically Hermitian), then the Dixmier estimate under the
// given extended-limit surrogate. Demands the exact path (N <= 4096).
EstimatorResult dixmier_side(const operators::SparseHermitianOperator& op,
                             const lattice::WeightField& weights, double t,
                             const seq::ExtendedLimitSurrogate& surrogate);

// Same estimator applied to an explicit dense symmetric matrix (testbeds).
EstimatorResult dixmier_from_matrix(Eigen::MatrixXd symmetric,
                                    const seq::ExtendedLimitSurrogate& surrogate);

// Ball-averaged Tr(f(P) M_chi)/|B| with f given by Chebyshev coefficients on
// the operator's certified spectral interval. aux["support_warning"] = 1 when
// the declared support misses the spectrum entirely.
EstimatorResult dos_functional(const operators::SparseHermitianOperator& op,
                               const lattice::LatticeGeometry& geom,
                               const std::vector<double>& cheb_coeffs,
                               double support_lo, double support_hi,
                               const std::vector<double>& radii);

// Jackson-damped Chebyshev moment histogram of the per-site spectral measure.
DOSMeasure kpm_dos_histogram(const operators::SparseHermitianOperator& op,
                             const lattice::LatticeGeometry& geom, int n_moments,
                             const operators::ProbeEnsemble& probes,
                             int n_bins = 64);

// Chebyshev interpolation coefficients of fn on [lo,hi] (degree+1 values).
std::vector<double> chebyshev_fit(const std::function<double(double)>& fn,
                                  double lo, double hi, int degree);

// Largest admissible ball radius for the geometry (box_min/2 minus the
// box_min/4 guard band).
double max_guarded_radius(const lattice::LatticeGeometry& geom);

}  // namespace dostrace::dos
