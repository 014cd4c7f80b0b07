#include "dostrace/dos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dostrace/dense.hpp"
#include "dostrace/parallel.hpp"
#include "dostrace/rng.hpp"

namespace dostrace::dos {

using operators::HeatApplier;
using operators::SparseHermitianOperator;

namespace {

constexpr double kPi = 3.14159265358979323846;

void finish_last3(EstimatorResult& res) {
    const std::size_t n = res.approximants.size();
    const std::size_t take = std::min<std::size_t>(3, n);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, acc = 0.0;
    for (std::size_t i = n - take; i < n; ++i) {
        double v = res.approximants[i].second;
        acc += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    res.value = acc / static_cast<double>(take);
    res.converged = (hi - lo) <= 0.01 * std::max(std::fabs(res.value), 1e-300);
}

// Heat-kernel diagonal on the listed sites, certified well below the 1%
// estimator tolerances.
std::vector<double> heat_diagonal(const SparseHermitianOperator& op, double t,
                                  const std::vector<std::int64_t>& sites) {
    HeatApplier applier(op,
                        op.dimension() <= operators::kDenseEigCut
                            ? HeatApplier::Method::ExactEig
                            : HeatApplier::Method::Chebyshev,
                        1e-12);
    return applier.diagonal(t, sites);
}

}  // namespace

double max_guarded_radius(const lattice::LatticeGeometry& geom) {
    int box_min = *std::min_element(geom.extents().begin(), geom.extents().end());
    return box_min / 2.0 - box_min / 4.0;
}

EstimatorResult ball_average_heat_trace(const SparseHermitianOperator& op,
                                        const lattice::LatticeGeometry& geom,
                                        double t, const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("ball_average: radii empty");
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("ball_average: radii must increase");
    if (radii.back() > max_guarded_radius(geom) + 1e-9)
        throw std::invalid_argument("geometry error: radius exceeds guard band");
    if (op.dimension() != geom.num_sites())
        throw std::invalid_argument("ball_average: operator/geometry mismatch");

    // One diagonal pass over the largest ball, then shell sums per radius.
    std::vector<std::int64_t> sites;
    for (std::int64_t s = 0; s < geom.num_sites(); ++s)
        if (geom.in_ball(s, radii.back())) sites.push_back(s);
    std::vector<double> hd = t == 0.0 ? std::vector<double>(sites.size(), 1.0)
                                      : heat_diagonal(op, t, sites);

    EstimatorResult res;
    res.method = "ball-average";
    for (double R : radii) {
        double acc = 0.0;
        std::int64_t vol = 0;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            if (geom.in_ball(sites[i], R)) {
                acc += hd[i];
                ++vol;
            }
        }
        if (vol == 0) throw std::invalid_argument("ball_average: empty ball");
        res.approximants.emplace_back(R, acc / static_cast<double>(vol));
    }
    finish_last3(res);
    return res;
}

EstimatorResult epsilon_formula(const SparseHermitianOperator& op,
                                const lattice::LatticeGeometry& geom,
                                const lattice::WeightField& weights, double t,
                                const std::vector<double>& eps_grid) {
    if (eps_grid.empty()) throw std::invalid_argument("epsilon_formula: empty grid");
    const auto& w = weights.values();
    if (static_cast<std::int64_t>(w.size()) != op.dimension())
        throw std::invalid_argument("epsilon_formula: weight/operator mismatch");

    double eps_min = *std::min_element(eps_grid.begin(), eps_grid.end());
    std::vector<std::int64_t> support;
    for (std::int64_t s = 0; s < op.dimension(); ++s)
        if (w[s] >= eps_min) support.push_back(s);
    if (support.empty()) throw std::invalid_argument("epsilon_formula: empty mask");
    std::vector<double> hd = t == 0.0 ? std::vector<double>(support.size(), 1.0)
                                      : heat_diagonal(op, t, support);

    // Weight value per achieved distance (w is radial).
    const auto& dists = geom.achieved_distances();
    std::vector<double> w_of_dist(dists.size(), -1.0);
    for (std::int64_t s = 0; s < geom.num_sites(); ++s) {
        auto it = std::lower_bound(dists.begin(), dists.end(),
                                   geom.distance2_from_basepoint(s));
        w_of_dist[static_cast<std::size_t>(it - dists.begin())] = w[s];
    }

    bool masks_ok = true;
    EstimatorResult res;
    res.method = "epsilon";
    std::vector<double> grid = eps_grid;
    std::sort(grid.begin(), grid.end(), std::greater<double>());  // eps decreasing
    for (double eps : grid) {
        double acc = 0.0;
        std::int64_t count = 0;
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (w[support[i]] >= eps) {
                acc += hd[i];
                ++count;
            }
        }
        if (count == 0) throw std::invalid_argument("epsilon_formula: empty mask");
        res.approximants.emplace_back(eps, eps * acc);

        // Mask identity: {w >= eps} equals the ball at the largest achieved
        // distance whose weight still clears eps.
        std::int64_t matched = -1;
        for (std::size_t i = 0; i < dists.size(); ++i)
            if (w_of_dist[i] >= eps) matched = dists[i];
        if (matched >= 0) {
            auto ball = geom.ball_indicator(geom.radius_of(matched));
            for (std::int64_t s = 0; s < geom.num_sites(); ++s)
                if (ball[s] != (w[s] >= eps)) masks_ok = false;
        } else {
            masks_ok = false;
        }
    }
    res.aux["mask_identity"] = masks_ok ? 1.0 : 0.0;
    finish_last3(res);
    return res;
}

EstimatorResult s_limit_formula(const SparseHermitianOperator& op,
                                const lattice::LatticeGeometry& geom,
                                const lattice::WeightField& weights, double t,
                                std::vector<double> s_grid) {
    if (s_grid.size() < 2)
        throw std::invalid_argument("s_limit_formula: need at least two s values");
    std::sort(s_grid.begin(), s_grid.end(), std::greater<double>());
    if (s_grid.front() > 2.0 || s_grid.back() <= 1.0)
        throw std::invalid_argument("s_limit_formula: s grid must lie in (1,2]");
    const auto& w = weights.values();

    std::vector<std::int64_t> all(op.dimension());
    std::iota(all.begin(), all.end(), 0);
    std::vector<double> hd = t == 0.0 ? std::vector<double>(all.size(), 1.0)
                                      : heat_diagonal(op, t, all);

    // Local heat density for the tail plug-in: average over the ball of
    // radius box_min/8 around the basepoint.
    int box_min = *std::min_element(geom.extents().begin(), geom.extents().end());
    double rho_local = 0.0;
    std::int64_t nloc = 0;
    for (std::int64_t s = 0; s < geom.num_sites(); ++s)
        if (geom.in_ball(s, box_min / 8.0)) {
            rho_local += hd[s];
            ++nloc;
        }
    rho_local /= std::max<std::int64_t>(nloc, 1);

    const double vol_edge = static_cast<double>(geom.num_sites());  // |B(d_max)|
    EstimatorResult res;
    res.method = "s-limit";
    double max_corr_frac = 0.0;
    for (double s : s_grid) {
        double tr = 0.0;
        for (std::int64_t i = 0; i < op.dimension(); ++i)
            tr += hd[i] * std::pow(w[i], s);
        double raw = (s - 1.0) * tr;
        // sum_{x beyond box} hd w^s ~ rho_hat int_{d_max}^inf V'(r)(1+V)^{-s} dr
        double corr = rho_local * std::pow(1.0 + vol_edge, 1.0 - s);
        res.approximants.emplace_back(s, raw + corr);
        if (raw + corr != 0.0)
            max_corr_frac = std::max(max_corr_frac, std::fabs(corr / (raw + corr)));
    }
    res.aux["tail_correction_max_fraction"] = max_corr_frac;

    // Neville extrapolation to s = 1 in x = s-1; the depth-(m-1) vs
    // depth-(m-2) difference is the reported residual.
    std::vector<double> x(s_grid.size()), f(s_grid.size());
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        x[i] = s_grid[i] - 1.0;
        f[i] = res.approximants[i].second;
    }
    double prev = f[0];
    for (std::size_t j = 1; j < x.size(); ++j) {
        prev = f[0];
        for (std::size_t i = 0; i + j < x.size(); ++i)
            f[i] = (x[i + j] * f[i] - x[i] * f[i + 1]) / (x[i + j] - x[i]);
    }
    res.value = f[0];
    double last_correction = std::fabs(res.value - prev);
    res.converged = last_correction <= 0.01 * std::max(std::fabs(res.value), 1e-300);
    res.aux["richardson_last_correction"] = last_correction;
    return res;
}

EstimatorResult dixmier_from_matrix(Eigen::MatrixXd symmetric,
                                    const seq::ExtendedLimitSurrogate& surrogate) {
    symmetric = 0.5 * (symmetric + symmetric.transpose()).eval();
    std::vector<double> ev = dense::sym_eigenvalues(std::move(symmetric));
    std::vector<double> ordered = seq::eigenvalue_order(std::move(ev));
    auto est = seq::dixmier_estimate(ordered, surrogate);

    EstimatorResult res;
    res.method = "dixmier";
    res.value = est.value;
    res.converged = est.converged;
    res.aux["spread"] = est.spread;
    for (std::size_t v = 32; v < est.means.size(); v *= 2)
        res.approximants.emplace_back(static_cast<double>(v), est.means[v]);
    res.approximants.emplace_back(static_cast<double>(est.means.size() - 1),
                                  est.means.back());
    return res;
}

EstimatorResult dixmier_side(const SparseHermitianOperator& op,
                             const lattice::WeightField& weights, double t,
                             const seq::ExtendedLimitSurrogate& surrogate) {
    const std::int64_t n = op.dimension();
    if (n > operators::kNExact)
        throw operators::CapabilityError(
            "dixmier_side: needs the exact path (N <= 4096); rerun on a smaller instance");
    const auto& w = weights.values();
    Eigen::VectorXd sqrtw(n);
    for (std::int64_t i = 0; i < n; ++i) sqrtw[i] = std::sqrt(w[i]);

    HeatApplier applier(op,
                        n <= operators::kDenseEigCut ? HeatApplier::Method::ExactEig
                                                     : HeatApplier::Method::Chebyshev,
                        1e-11);
    Eigen::MatrixXd K(n, n);
    parallel::parallel_for(n, [&](std::int64_t j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[j] = sqrtw[j];
        Eigen::VectorXd col = applier.apply(t, e);
        col.array() *= sqrtw.array();
        K.col(j) = col;
    });
    return dixmier_from_matrix(std::move(K), surrogate);
}

namespace {

// Clenshaw application of a Chebyshev series of P mapped from [lo,hi] to a
// basis vector; used by the filtered functional.
Eigen::VectorXd cheb_series_apply(const SparseHermitianOperator& op,
                                  const std::vector<double>& coeffs, double lo,
                                  double hi, const Eigen::VectorXd& v) {
    const double c = 0.5 * (hi + lo);
    const double r = std::max(0.5 * (hi - lo), 1e-300);
    const auto n = static_cast<std::size_t>(v.size());
    const auto& k = kernels::active();
    Eigen::VectorXd acc = coeffs.empty() ? Eigen::VectorXd::Zero(v.size())
                                         : (coeffs[0] * v).eval();
    if (coeffs.size() <= 1) return acc;
    Eigen::VectorXd t_prev = v;
    Eigen::VectorXd pv(v.size());
    op.apply(v.data(), pv.data());
    Eigen::VectorXd t_cur = (pv - c * v) / r;
    k.axpy(coeffs[1], t_cur.data(), acc.data(), n);
    for (std::size_t j = 2; j < coeffs.size(); ++j) {
        op.apply(t_cur.data(), pv.data());
        k.cheb_combine(2.0 / r, pv.data(), -2.0 * c / r, t_cur.data(), t_prev.data(), n);
        std::swap(t_prev, t_cur);
        k.axpy(coeffs[j], t_cur.data(), acc.data(), n);
    }
    return acc;
}

}  // namespace

std::vector<double> chebyshev_fit(const std::function<double(double)>& fn,
                                  double lo, double hi, int degree) {
    const int m = degree + 1;
    std::vector<double> samples(m);
    for (int j = 0; j < m; ++j) {
        double theta = kPi * (j + 0.5) / m;
        double x = std::cos(theta);
        samples[j] = fn(0.5 * (hi + lo) + 0.5 * (hi - lo) * x);
    }
    std::vector<double> coeffs(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j)
            acc += samples[j] * std::cos(kPi * k * (j + 0.5) / m);
        coeffs[k] = (k == 0 ? 1.0 : 2.0) * acc / m;
    }
    return coeffs;
}

EstimatorResult dos_functional(const SparseHermitianOperator& op,
                               const lattice::LatticeGeometry& geom,
                               const std::vector<double>& cheb_coeffs,
                               double support_lo, double support_hi,
                               const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("dos_functional: radii empty");
    auto bounds = op.spectral_bounds();
    EstimatorResult res;
    res.method = "functional";
    if (support_hi < bounds.lo || support_lo > bounds.hi)
        res.aux["support_warning"] = 1.0;

    std::vector<std::int64_t> sites;
    for (std::int64_t s = 0; s < geom.num_sites(); ++s)
        if (geom.in_ball(s, radii.back())) sites.push_back(s);
    std::vector<double> diag(sites.size());
    parallel::parallel_for(static_cast<std::int64_t>(sites.size()), [&](std::int64_t i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(op.dimension());
        e[sites[i]] = 1.0;
        diag[i] = cheb_series_apply(op, cheb_coeffs, bounds.lo, bounds.hi, e)[sites[i]];
    });
    for (double R : radii) {
        double acc = 0.0;
        std::int64_t vol = 0;
        for (std::size_t i = 0; i < sites.size(); ++i)
            if (geom.in_ball(sites[i], R)) {
                acc += diag[i];
                ++vol;
            }
        if (vol == 0) throw std::invalid_argument("dos_functional: empty ball");
        res.approximants.emplace_back(R, acc / static_cast<double>(vol));
    }
    finish_last3(res);
    return res;
}

DOSMeasure kpm_dos_histogram(const SparseHermitianOperator& op,
                             const lattice::LatticeGeometry& geom, int n_moments,
                             const operators::ProbeEnsemble& probes, int n_bins) {
    if (n_moments < 64)
        throw std::invalid_argument("kpm_dos_histogram: n_moments >= 64");
    if (n_bins < 8) throw std::invalid_argument("kpm_dos_histogram: n_bins >= 8");
    const std::int64_t n = op.dimension();
    auto bounds = op.spectral_bounds();
    const double c = 0.5 * (bounds.hi + bounds.lo);
    const double r = std::max(0.5 * (bounds.hi - bounds.lo), 1e-300);
    const auto& kr = kernels::active();

    // Moments mu_m = E_z <z, T_m(X) z> / N, accumulated per probe
    // deterministically and reduced in fixed order.
    std::vector<std::vector<double>> permom(probes.n_probes,
                                            std::vector<double>(n_moments, 0.0));
    parallel::parallel_for(probes.n_probes, [&](std::int64_t p) {
        Eigen::VectorXd z(n);
        for (std::int64_t i = 0; i < n; ++i) {
            auto idx = static_cast<std::uint64_t>(i);
            z[i] = probes.kind == operators::ProbeEnsemble::Kind::Rademacher
                       ? rng::rademacher(probes.seed, static_cast<std::uint64_t>(p) + 1, idx)
                       : rng::gaussian(probes.seed, static_cast<std::uint64_t>(p) + 1, idx);
        }
        auto& mom = permom[p];
        Eigen::VectorXd t0 = z;
        Eigen::VectorXd pv(n);
        op.apply(z.data(), pv.data());
        Eigen::VectorXd t1 = (pv - c * z) / r;
        mom[0] = z.dot(t0);
        mom[1] = z.dot(t1);
        for (int m = 2; m < n_moments; ++m) {
            op.apply(t1.data(), pv.data());
            kr.cheb_combine(2.0 / r, pv.data(), -2.0 * c / r, t1.data(), t0.data(),
                            static_cast<std::size_t>(n));
            std::swap(t0, t1);
            mom[m] = z.dot(t1);
        }
    });
    std::vector<double> mu(n_moments, 0.0);
    for (const auto& mom : permom)
        for (int m = 0; m < n_moments; ++m) mu[m] += mom[m];
    for (int m = 0; m < n_moments; ++m)
        mu[m] /= static_cast<double>(probes.n_probes) * static_cast<double>(n);

    // Jackson damping
    const int M = n_moments;
    for (int m = 0; m < M; ++m) {
        double g = ((M - m + 1.0) * std::cos(kPi * m / (M + 1.0)) +
                    std::sin(kPi * m / (M + 1.0)) / std::tan(kPi / (M + 1.0))) /
                   (M + 1.0);
        mu[m] *= g;
    }

    DOSMeasure out;
    out.bin_edges.resize(n_bins + 1);
    for (int b = 0; b <= n_bins; ++b)
        out.bin_edges[b] = bounds.lo + (bounds.hi - bounds.lo) * b / n_bins;
    out.masses.assign(n_bins, 0.0);
    // per-bin mass: integral of the Chebyshev density over the bin,
    // int T_m(x)/(pi sqrt(1-x^2)) dx = (sin(m th_a) - sin(m th_b)) / (m pi)
    std::vector<double> theta(n_bins + 1);
    for (int b = 0; b <= n_bins; ++b) {
        double x = std::clamp((out.bin_edges[b] - c) / r, -1.0, 1.0);
        theta[b] = std::acos(x);
    }
    for (int b = 0; b < n_bins; ++b) {
        double ta = theta[b], tb = theta[b + 1];  // theta decreasing in lambda
        double acc = mu[0] * (ta - tb) / kPi;
        for (int m = 1; m < M; ++m)
            acc += 2.0 * mu[m] * (std::sin(m * ta) - std::sin(m * tb)) / (m * kPi);
        out.masses[b] = acc;
    }
    for (double t : {0.5, 1.0, 2.0}) {
        double acc = 0.0;
        for (int b = 0; b < n_bins; ++b) {
            double mid = 0.5 * (out.bin_edges[b] + out.bin_edges[b + 1]);
            acc += out.masses[b] * std::exp(-t * mid);
        }
        out.laplace_samples.emplace_back(t, acc);
    }
    out.metadata["damping"] = "jackson";
    out.metadata["probes"] = std::to_string(probes.n_probes);
    out.metadata["moments"] = std::to_string(n_moments);
    out.metadata["normalization"] = "per-site (" + std::to_string(geom.num_sites()) +
                                    " sites)";
    return out;
}

}  // namespace dostrace::dos
