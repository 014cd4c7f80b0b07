#include "dostrace/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dostrace/dense.hpp"
#include "dostrace/rng.hpp"

namespace dostrace::operators {

namespace {

void check_symmetric(const sparse::CsrReal& m) {
    if (m.rows != m.cols)
        throw std::invalid_argument("operator matrix must be square");
    // exact storage-level symmetry
    sparse::Builder<double> tb(m.rows, m.cols);
    for (std::int64_t r = 0; r < m.rows; ++r)
        for (std::int64_t k = m.rowptr[r]; k < m.rowptr[r + 1]; ++k)
            tb.add(m.colidx[k], r, m.values[k]);
    auto tr = tb.build();
    if (tr.rowptr != m.rowptr || tr.colidx != m.colidx || tr.values != m.values)
        throw std::invalid_argument("operator matrix is not exactly symmetric");
}

SpectralBounds gershgorin(const sparse::CsrReal& m) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::int64_t r = 0; r < m.rows; ++r) {
        double center = 0.0, radius = 0.0;
        for (std::int64_t k = m.rowptr[r]; k < m.rowptr[r + 1]; ++k) {
            if (m.colidx[k] == r)
                center += m.values[k];
            else
                radius += std::fabs(m.values[k]);
        }
        lo = std::min(lo, center - radius);
        hi = std::max(hi, center + radius);
    }
    if (m.rows == 0) return {0.0, 0.0};
    return {lo, hi};
}

}  // namespace

SparseHermitianOperator::SparseHermitianOperator(sparse::CsrReal matrix)
    : matrix_(std::move(matrix)) {
    check_symmetric(matrix_);
}

Eigen::VectorXd SparseHermitianOperator::apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(matrix_.rows);
    matrix_.multiply(x.data(), y.data());
    return y;
}

Eigen::MatrixXd SparseHermitianOperator::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(matrix_.rows, matrix_.cols);
    for (std::int64_t r = 0; r < matrix_.rows; ++r)
        for (std::int64_t k = matrix_.rowptr[r]; k < matrix_.rowptr[r + 1]; ++k)
            d(r, matrix_.colidx[k]) += matrix_.values[k];
    return d;
}

SpectralBounds lanczos_bounds(const SparseHermitianOperator& op, int max_iter) {
    const std::int64_t n = op.dimension();
    if (n == 1) {
        double v = op.to_dense()(0, 0);
        return {v, v};
    }
    const int m = static_cast<int>(std::min<std::int64_t>(max_iter, n));
    Eigen::VectorXd v(n);
    for (std::int64_t i = 0; i < n; ++i)
        v[i] = rng::uniform(0x5EEDBA5Eull, 0, static_cast<std::uint64_t>(i)) - 0.5;
    v.normalize();
    Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(n);
    std::vector<double> alpha, beta;  // beta[j] couples step j and j+1
    double b = 0.0;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = op.apply(v);
        double a = v.dot(w);
        alpha.push_back(a);
        w -= a * v;
        if (j > 0) w -= b * v_prev;
        b = w.norm();
        if (b < 1e-14) break;
        beta.push_back(b);
        v_prev = v;
        v = w / b;
    }
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        T(j, j) = alpha[j];
        if (j + 1 < k) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const auto& ritz = es.eigenvalues();
    const auto& Y = es.eigenvectors();
    // beta[k-1], when present, couples to the next Krylov vector and bounds
    // the Ritz residuals; an early breakdown means the residual is ~0.
    double blast = static_cast<int>(beta.size()) >= k ? beta[k - 1] : 0.0;
    double res_lo = std::fabs(blast * Y(k - 1, 0));
    double res_hi = std::fabs(blast * Y(k - 1, k - 1));
    double spread = ritz[k - 1] - ritz[0];
    double pad = 0.01 * std::max(spread, 1e-12);
    SpectralBounds out{ritz[0] - res_lo - pad, ritz[k - 1] + res_hi + pad};
    SpectralBounds g = gershgorin(op.matrix());
    out.lo = std::max(out.lo, g.lo);
    out.hi = std::min(out.hi, g.hi);
    if (out.lo > out.hi) out = g;
    return out;
}

SpectralBounds SparseHermitianOperator::spectral_bounds() const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!bounds_) bounds_ = lanczos_bounds(*this);
    return *bounds_;
}

SparseHermitianOperator build_lattice_laplacian(const lattice::LatticeGeometry& geom) {
    const std::int64_t n = geom.num_sites();
    sparse::Builder<double> b(n, n);
    const double degree = 2.0 * geom.dim();  // infinite-lattice degree, truncated
    for (std::int64_t s = 0; s < n; ++s) {
        b.add(s, s, degree);
        for (std::int64_t nb : geom.neighbors(s)) b.add(s, nb, -1.0);
    }
    return SparseHermitianOperator(b.build());
}

SparseHermitianOperator build_schrodinger(const lattice::LatticeGeometry& geom,
                                          const PotentialSpec& potential) {
    const std::int64_t n = geom.num_sites();
    sparse::Builder<double> b(n, n);
    const double degree = 2.0 * geom.dim();
    for (std::int64_t s = 0; s < n; ++s) {
        double v = 0.0;
        if (const auto* iid = std::get_if<IidUniformPotential>(&potential)) {
            if (iid->b < iid->a)
                throw std::invalid_argument("iid-uniform potential: need b >= a");
            v = rng::uniform_ab(iid->seed, 1, static_cast<std::uint64_t>(s), iid->a,
                                iid->b);
        } else if (const auto* tab = std::get_if<PeriodicTablePotential>(&potential)) {
            if (tab->table.empty())
                throw std::invalid_argument("periodic table potential: empty table");
            auto coords = geom.site_coords(s);
            v = tab->table[coords[0] % tab->table.size()];
        } else {
            v = std::get<ConstantPotential>(potential).c;
        }
        b.add(s, s, degree + v);
        for (std::int64_t nb : geom.neighbors(s)) b.add(s, nb, -1.0);
    }
    return SparseHermitianOperator(b.build());
}

sparse::CsrReal commutator_with_multiplier(const SparseHermitianOperator& op,
                                           const std::vector<double>& field) {
    const auto& m = op.matrix();
    if (static_cast<std::int64_t>(field.size()) != m.rows)
        throw std::invalid_argument("commutator: field size mismatch");
    sparse::Builder<double> b(m.rows, m.cols);
    for (std::int64_t r = 0; r < m.rows; ++r)
        for (std::int64_t k = m.rowptr[r]; k < m.rowptr[r + 1]; ++k) {
            double v = m.values[k] * (field[m.colidx[k]] - field[r]);
            if (v != 0.0) b.add(r, m.colidx[k], v);
        }
    return b.build();
}

namespace {

// Gauss-Legendre nodes/weights on [0,1] by Golub-Welsch.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i - 1, i) = J(i, i - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
        double w0 = es.eigenvectors()(0, i);
        weights[i] = w0 * w0;  // weights on [-1,1] are 2 w0^2; halved for [0,1]
    }
}

Eigen::MatrixXd heat_dense(const dense::SymEig& eig, double t) {
    Eigen::Map<const Eigen::VectorXd> lam(eig.values.data(),
                                          static_cast<std::int64_t>(eig.values.size()));
    return eig.vectors * (-t * lam.array()).exp().matrix().asDiagonal() *
           eig.vectors.transpose();
}

}  // namespace

double duhamel_residual(const Eigen::MatrixXd& P, const Eigen::MatrixXd& W,
                        double t, int nodes) {
    if (P.rows() > 128)
        throw CapabilityError("duhamel_residual: dense path limited to N <= 128");
    if (nodes < 8) throw std::invalid_argument("duhamel_residual: nodes >= 8");
    dense::SymEig eig = dense::sym_eigen(P);
    Eigen::MatrixXd Et = heat_dense(eig, t);
    Eigen::MatrixXd lhs = Et * W - W * Et;
    Eigen::MatrixXd bracket = P * W - W * P;
    std::vector<double> xs, ws;
    gauss_legendre(nodes, xs, ws);
    Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(P.rows(), P.cols());
    for (int i = 0; i < nodes; ++i) {
        double s = t * xs[i];
        integral += (t * ws[i]) * (heat_dense(eig, s) * bracket * heat_dense(eig, t - s));
    }
    Eigen::MatrixXd resid = lhs + integral;
    auto sv = dense::singular_values(resid);
    return sv.empty() ? 0.0 : sv.front();
}

double trace_norm_diagnostic(const SparseHermitianOperator& op, double t,
                             const std::vector<double>& field) {
    if (op.dimension() > 2048)
        throw CapabilityError("trace_norm_diagnostic: dense path limited to N <= 2048");
    dense::SymEig eig = dense::sym_eigen(op.to_dense());
    Eigen::MatrixXd Et = heat_dense(eig, t);
    auto comm = commutator_with_multiplier(op, field);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(comm.rows, comm.cols);
    for (std::int64_t r = 0; r < comm.rows; ++r)
        for (std::int64_t k = comm.rowptr[r]; k < comm.rowptr[r + 1]; ++k)
            B(r, comm.colidx[k]) += comm.values[k];
    Eigen::MatrixXd prod = Et * B;
    auto sv = dense::singular_values(prod);
    double acc = 0.0;
    for (double s : sv) acc += s;
    return acc;
}

GradedDiracPair::GradedDiracPair(Eigen::MatrixXcd d_plus,
                                 std::vector<std::int64_t> minus_sites, int Lx,
                                 int Ly, int flux_p, int flux_q)
    : d_plus_(std::move(d_plus)),
      minus_sites_(std::move(minus_sites)),
      lx_(Lx),
      ly_(Ly),
      p_(flux_p),
      q_(flux_q) {
    if (d_plus_.rows() != static_cast<std::int64_t>(minus_sites_.size()))
        throw std::invalid_argument("GradedDiracPair: minus site list mismatch");
}

int GradedDiracPair::expected_index() const {
    return static_cast<int>(plus_dim() - minus_dim());
}

Eigen::MatrixXcd GradedDiracPair::square_plus() const {
    return d_plus_.adjoint() * d_plus_;
}

Eigen::MatrixXcd GradedDiracPair::square_minus() const {
    return d_plus_ * d_plus_.adjoint();
}

GradedDiracPair build_hofstadter_dirac(int Lx, int Ly, int flux_p, int flux_q) {
    if (Lx < 1 || Ly < 1) throw std::invalid_argument("hofstadter: Lx, Ly >= 1");
    if (flux_q < 1 || flux_p < 0)
        throw std::invalid_argument("hofstadter: flux must be p/q with q >= 1, p >= 0");
    if (Lx % flux_q != 0)
        throw std::invalid_argument("gauge error: q must divide Lx");
    const std::int64_t N = static_cast<std::int64_t>(Lx) * Ly;
    if (N > kNExact) throw CapabilityError("hofstadter: torus exceeds exact-path cap");
    const std::int64_t nphi64 = static_cast<std::int64_t>(flux_p) * Lx * Ly / flux_q;
    if (nphi64 >= N && flux_p > 0)
        throw std::invalid_argument("hofstadter: flux too dense (N_phi >= N)");
    const int NPhi = static_cast<int>(nphi64);

    const double alpha = static_cast<double>(flux_p) / flux_q;
    auto sid = [&](int x, int y) {
        return static_cast<std::int64_t>(((x % Lx) + Lx) % Lx) * Ly + (((y % Ly) + Ly) % Ly);
    };
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(N, N);
    const std::complex<double> im(0.0, 1.0);
    for (int x = 0; x < Lx; ++x)
        for (int y = 0; y < Ly; ++y) {
            C(sid(x, y), sid(x - 1, y)) += 1.0;  // T_x
            C(sid(x, y), sid(x, y - 1)) +=
                im * std::exp(im * (2.0 * M_PI * alpha * x));  // i T_y
        }

    // Flux anchors: N_phi sites on an (a x b) grid, offset by half a grid
    // spacing so they stay away from the basepoint's antipode.
    std::vector<std::int64_t> anchors;
    if (NPhi > 0) {
        int best_a = -1;
        double best_score = std::numeric_limits<double>::infinity();
        double target = std::sqrt(static_cast<double>(NPhi) * Lx / Ly);
        for (int a = 1; a <= NPhi; ++a) {
            if (NPhi % a != 0) continue;
            int bb = NPhi / a;
            if (a > Lx || bb > Ly) continue;
            double score = std::fabs(a - target);
            if (score < best_score) {
                best_score = score;
                best_a = a;
            }
        }
        if (best_a < 0)
            throw std::invalid_argument("hofstadter: cannot place anchors on torus");
        int a = best_a, bcols = NPhi / best_a;
        int offx = Lx / (2 * a), offy = Ly / (2 * bcols);
        for (int j = 0; j < NPhi; ++j) {
            int ax = (j % a) * Lx / a + offx;
            int ay = (j / a) * Ly / bcols + offy;
            anchors.push_back(sid(ax, ay));
        }
        std::sort(anchors.begin(), anchors.end());
        if (std::unique(anchors.begin(), anchors.end()) != anchors.end())
            throw std::invalid_argument("hofstadter: anchor placement collided");
    }

    std::vector<std::int64_t> keep;
    keep.reserve(N - NPhi);
    std::size_t ai = 0;
    for (std::int64_t s = 0; s < N; ++s) {
        if (ai < anchors.size() && anchors[ai] == s) {
            ++ai;
            continue;
        }
        keep.push_back(s);
    }
    Eigen::MatrixXcd D(N - NPhi, N);
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(keep.size()); ++r)
        D.row(r) = C.row(keep[r]);
    return GradedDiracPair(std::move(D), std::move(keep), Lx, Ly, flux_p, flux_q);
}

}  // namespace dostrace::operators
