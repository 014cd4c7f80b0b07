#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dostrace/lattice.hpp"
#include "dostrace/sparse.hpp"

namespace dostrace::operators {

// Instance too large for the requested exact path.
struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::int64_t kNExact = 4096;   // boundary for dense-eig / exact paths
constexpr std::int64_t kDenseEigCut = 1024;  // below this, cache a full eigensystem

struct SpectralBounds {
    double lo = 0.0;
    double hi = 0.0;
};

// Sparse real-symmetric operator with lazily cached spectral bounds.
class SparseHermitianOperator {
  public:
    explicit SparseHermitianOperator(sparse::CsrReal matrix);

    std::int64_t dimension() const { return matrix_.rows; }
    const sparse::CsrReal& matrix() const { return matrix_; }
    void apply(const double* x, double* y) const { matrix_.multiply(x, y); }
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd to_dense() const;

    // Certified-containment bounds: Lanczos extremal estimates padded by
    // residual + 1% of spread, clamped into the Gershgorin interval; cached.
    SpectralBounds spectral_bounds() const;

  private:
    sparse::CsrReal matrix_;
    mutable std::optional<SpectralBounds> bounds_;
    mutable std::mutex mutex_;
};

SparseHermitianOperator build_lattice_laplacian(const lattice::LatticeGeometry& geom);

struct IidUniformPotential {
    double a = 0.0;
    double b = 1.0;
    std::uint64_t seed = 0;
};
struct PeriodicTablePotential {
    std::vector<double> table;  // indexed by x-coordinate mod table size
};
struct ConstantPotential {
    double c = 0.0;
};
using PotentialSpec =
    std::variant<IidUniformPotential, PeriodicTablePotential, ConstantPotential>;

// Laplacian plus diagonal potential; iid entries come from the counter-based
// stream keyed by (seed, site index), so the operator is bit-reproducible.
SparseHermitianOperator build_schrodinger(const lattice::LatticeGeometry& geom,
                                          const PotentialSpec& potential);

// e^{-tP} applied by exact diagonalization (cached) or a Chebyshev expansion
// with a certified modified-Bessel tail bound.
class HeatApplier {
  public:
    enum class Method { Auto, ExactEig, Chebyshev };

    explicit HeatApplier(const SparseHermitianOperator& op,
                         Method method = Method::Auto, double tol = 1e-10);

    // Certified ||result - e^{-tP} v|| <= tol * ||e^{-tP}|| ||v||.
    Eigen::VectorXd apply(double t, const Eigen::VectorXd& v) const;
    // (e^{-tP})_{xx} for the given sites.
    std::vector<double> diagonal(double t, const std::vector<std::int64_t>& sites) const;
    // Chebyshev degree the certified bound selects for this t (0 = exact path).
    int degree(double t) const;
    Method resolved_method() const { return method_; }

  private:
    const SparseHermitianOperator& op_;
    Method method_;
    double tol_;
    struct EigCache;
    std::shared_ptr<EigCache> eig_;  // ExactEig only
    SpectralBounds bounds_;

    std::vector<double> cheb_coeffs(double t) const;
    Eigen::VectorXd cheb_apply(double t, const Eigen::VectorXd& v) const;
};

struct ProbeEnsemble {
    int n_probes = 64;
    std::uint64_t seed = 0;
    enum class Kind { Rademacher, Gaussian } kind = Kind::Rademacher;
};

struct TraceResult {
    double value = 0.0;
    double std_error = 0.0;  // 0 in exact mode
};

// Tr(e^{-tP} M_g) for a per-site diagonal weight g. Exact mode uses the
// cached eigensystem below kDenseEigCut and certified Chebyshev heat-kernel
// columns up to kNExact; stochastic mode is a Hutchinson estimate (requires
// n_probes >= 8).
TraceResult weighted_heat_trace(const SparseHermitianOperator& op, double t,
                                const std::vector<double>& diag_weight);
TraceResult weighted_heat_trace(const SparseHermitianOperator& op, double t,
                                const std::vector<double>& diag_weight,
                                const ProbeEnsemble& probes);

// [P, M_w]: entries P_{xy} (w(y) - w(x)); anti-symmetric for symmetric P.
sparse::CsrReal commutator_with_multiplier(const SparseHermitianOperator& op,
                                           const std::vector<double>& field);

// Spectral-norm residual of Duhamel's identity
//   [e^{-tP}, W] + int_0^t e^{-sP} [P,W] e^{-(t-s)P} ds = 0
// on dense matrices (N <= 128), Gauss-Legendre quadrature with `nodes` points.
double duhamel_residual(const Eigen::MatrixXd& P, const Eigen::MatrixXd& W,
                        double t, int nodes);

// Trace norm (sum of singular values) of e^{-tP} [P, M_field].
double trace_norm_diagnostic(const SparseHermitianOperator& op, double t,
                             const std::vector<double>& field);

// Chiral pair on the magnetic torus. D_plus is the restriction of the
// Landau-gauge magnetic translation sum T_x + i T_y to the complement of
// N_phi = p Lx Ly / q evenly spaced anchor sites, which carries the index:
// dim ker D_plus - dim ker D_minus = N_phi for any flux realisation.
class GradedDiracPair {
  public:
    GradedDiracPair(Eigen::MatrixXcd d_plus, std::vector<std::int64_t> minus_sites,
                    int Lx, int Ly, int flux_p, int flux_q);

    const Eigen::MatrixXcd& d_plus() const { return d_plus_; }
    // Site indices (full torus numbering) carried by the minus component.
    const std::vector<std::int64_t>& minus_sites() const { return minus_sites_; }
    int Lx() const { return lx_; }
    int Ly() const { return ly_; }
    std::int64_t plus_dim() const { return d_plus_.cols(); }
    std::int64_t minus_dim() const { return d_plus_.rows(); }
    int flux_p() const { return p_; }
    int flux_q() const { return q_; }
    int expected_index() const;

    Eigen::MatrixXcd square_plus() const;   // D_- D_+ on the plus sections
    Eigen::MatrixXcd square_minus() const;  // D_+ D_- on the minus sections

  private:
    Eigen::MatrixXcd d_plus_;
    std::vector<std::int64_t> minus_sites_;
    int lx_, ly_, p_, q_;
};

// Landau-gauge magnetic pair with flux 2 pi p/q per plaquette on the periodic
// torus; requires q | Lx. Throws std::invalid_argument otherwise.
GradedDiracPair build_hofstadter_dirac(int Lx, int Ly, int flux_p, int flux_q);

// Lanczos-based extremal bounds (exposed mostly for tests; operators cache it).
SpectralBounds lanczos_bounds(const SparseHermitianOperator& op, int max_iter = 128);

}  // namespace dostrace::operators
