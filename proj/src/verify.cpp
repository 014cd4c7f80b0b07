#include "dostrace/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dostrace/dense.hpp"
#include "dostrace/dos.hpp"
#include "dostrace/lattice.hpp"
#include "dostrace/operators.hpp"
#include "dostrace/parallel.hpp"
#include "dostrace/rng.hpp"

namespace dostrace::verify {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MainTheoremReport matrix_model_main_theorem(std::int64_t n, const PSpec& p_spec,
                                            double t) {
    if (n < 256)
        throw std::invalid_argument("matrix_model_main_theorem: n >= 256");
    VectorXd w(n), sqrtw(n);
    for (std::int64_t k = 0; k < n; ++k) {
        w[k] = 1.0 / (k + 1.0);
        sqrtw[k] = std::sqrt(w[k]);
    }

    MatrixXd K(n, n);
    std::vector<double> hd(n);  // diagonal of e^{-tP} in the model basis
    if (std::holds_alternative<FreeLaplacianSpec>(p_spec)) {
        lattice::LatticeGeometry geom({static_cast<int>(n)}, lattice::Metric::Euclidean,
                                      lattice::Boundary::Periodic);
        auto op = operators::build_lattice_laplacian(geom);
        operators::HeatApplier applier(op, operators::HeatApplier::Method::Chebyshev,
                                       1e-11);
        parallel::parallel_for(n, [&](std::int64_t j) {
            VectorXd e = VectorXd::Zero(n);
            e[j] = sqrtw[j];
            VectorXd col = applier.apply(t, e);
            col.array() *= sqrtw.array();
            K.col(j) = col;
        });
        std::vector<std::int64_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        hd = applier.diagonal(t, all);
    } else {
        auto rs = std::get<RandomSymSpec>(p_spec);
        if (n > 2048)
            throw operators::CapabilityError(
                "matrix_model_main_theorem: random-sym dense path capped at n <= 2048");
        MatrixXd P(n, n);
        double inv = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::int64_t i = 0; i < n; ++i)
            for (std::int64_t j = i; j < n; ++j) {
                double g = rng::gaussian(rs.seed, 2,
                                         static_cast<std::uint64_t>(i * n + j)) * inv;
                P(i, j) = g;
                P(j, i) = g;
            }
        auto eig = dense::sym_eigen(std::move(P));
        Eigen::Map<const VectorXd> lam(eig.values.data(), n);
        MatrixXd E = eig.vectors * (-t * lam.array()).exp().matrix().asDiagonal() *
                     eig.vectors.transpose();
        for (std::int64_t i = 0; i < n; ++i) hd[i] = E(i, i);
        K = sqrtw.asDiagonal() * E * sqrtw.asDiagonal();
    }

    auto dix = dos::dixmier_from_matrix(std::move(K),
                                        seq::ExtendedLimitSurrogate::log_extrapolation());

    // eps = 1/m family: chi_{[eps,inf)}(W) projects onto the first m
    // coordinates, so the trace is a prefix sum of the heat diagonal.
    std::vector<std::pair<double, double>> eps_family;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::int64_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + hd[i];
    std::vector<std::int64_t> ms;
    for (std::int64_t m = std::max<std::int64_t>(16, n / 64); m < n; m *= 2)
        ms.push_back(m);
    ms.push_back(n);
    for (std::int64_t m : ms) {
        double eps = 1.0 / static_cast<double>(m);
        eps_family.emplace_back(eps, eps * prefix[m]);
    }

    MainTheoremReport rep;
    rep.dixmier_value = dix.value;
    rep.dixmier_converged = dix.converged;
    std::size_t ne = eps_family.size();
    std::size_t take = std::min<std::size_t>(3, ne);
    double acc = 0.0, lo = 1e300, hi = -1e300;
    for (std::size_t i = ne - take; i < ne; ++i) {
        acc += eps_family[i].second;
        lo = std::min(lo, eps_family[i].second);
        hi = std::max(hi, eps_family[i].second);
    }
    rep.epsilon_value = acc / take;
    rep.epsilon_converged = (hi - lo) <= 0.01 * std::max(std::fabs(rep.epsilon_value), 1e-300);
    rep.gap = std::fabs(rep.dixmier_value - rep.epsilon_value);
    return rep;
}

std::vector<double> diag_values(const ASpec& spec, std::int64_t n) {
    std::vector<double> a(n);
    if (std::holds_alternative<IdentityDiag>(spec)) {
        std::fill(a.begin(), a.end(), 1.0);
    } else if (const auto* c = std::get_if<ConvergingDiag>(&spec)) {
        for (std::int64_t k = 0; k < n; ++k) a[k] = c->limit + c->decay / (k + 1.0);
    } else {
        const auto& v = std::get<CustomDiag>(spec).values;
        if (static_cast<std::int64_t>(v.size()) != n)
            throw std::invalid_argument("custom diagonal: size mismatch");
        a = v;
    }
    return a;
}

std::vector<double> diag_values(const BSpec& spec, std::int64_t n) {
    std::vector<double> b(n);
    if (std::holds_alternative<HarmonicDiag>(spec)) {
        for (std::int64_t k = 0; k < n; ++k) b[k] = 1.0 / (k + 1.0);
    } else if (const auto* f = std::get_if<FiniteRankDiag>(&spec)) {
        std::fill(b.begin(), b.end(), 0.0);
        for (std::int64_t k = 0; k < std::min(f->rank, n); ++k) b[k] = f->value;
    } else {
        const auto& v = std::get<CustomDiag>(spec).values;
        if (static_cast<std::int64_t>(v.size()) != n)
            throw std::invalid_argument("custom diagonal: size mismatch");
        b = v;
    }
    for (double v : b)
        if (v < 0.0) throw std::invalid_argument("B must be positive semidefinite");
    return b;
}

BridgeReport s_vs_epsilon_bridge(std::int64_t n, const ASpec& a_spec,
                                 const BSpec& b_spec, std::vector<double> s_grid,
                                 std::vector<double> eps_grid) {
    if (n < 16) throw std::invalid_argument("bridge: n >= 16");
    if (s_grid.size() < 2 || eps_grid.empty())
        throw std::invalid_argument("bridge: need s and eps grids");
    auto a = diag_values(a_spec, n);
    auto b = diag_values(b_spec, n);

    BridgeReport rep;
    rep.scale = *std::max_element(b.begin(), b.end());
    if (!(rep.scale > 0.0)) {
        rep.s_value = rep.eps_value = rep.gap = 0.0;
        return rep;
    }
    std::vector<double> bn(b);
    for (double& v : bn) v /= rep.scale;

    // Tail of sum a_k bn_k^s past the truncation, when the generators pin it.
    const bool harmonic = std::holds_alternative<HarmonicDiag>(b_spec);
    double a_limit = 0.0;
    if (std::holds_alternative<IdentityDiag>(a_spec)) a_limit = 1.0;
    if (const auto* c = std::get_if<ConvergingDiag>(&a_spec)) a_limit = c->limit;

    std::sort(s_grid.begin(), s_grid.end(), std::greater<double>());
    for (double s : s_grid) {
        if (!(s > 1.0) || s > 2.0)
            throw std::invalid_argument("bridge: s grid must lie in (1,2]");
        double tr = 0.0;
        for (std::int64_t k = 0; k < n; ++k)
            tr += a[k] * std::pow(bn[k], s);
        double corr = 0.0;
        if (harmonic && a_limit > 0.0) {
            // sum_{k>n} a* ((k+1) scale)^{-s} ~ a* scale^{-s} (n+1)^{1-s}/(s-1)
            corr = a_limit * std::pow(rep.scale, -s) * std::pow(n + 1.0, 1.0 - s);
        }
        double val = (s - 1.0) * tr + corr;
        rep.s_family.emplace_back(s, val);
        if (val != 0.0)
            rep.tail_correction_max = std::max(rep.tail_correction_max,
                                               std::fabs(corr / val));
    }
    // Richardson to s=1
    {
        std::vector<double> x(rep.s_family.size()), f(rep.s_family.size());
        for (std::size_t i = 0; i < rep.s_family.size(); ++i) {
            x[i] = rep.s_family[i].first - 1.0;
            f[i] = rep.s_family[i].second;
        }
        for (std::size_t j = 1; j < x.size(); ++j)
            for (std::size_t i = 0; i + j < x.size(); ++i)
                f[i] = (x[i + j] * f[i] - x[i] * f[i + 1]) / (x[i + j] - x[i]);
        rep.s_value = f[0];
    }

    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<double>());
    for (double eps : eps_grid) {
        if (!(eps > 0.0)) throw std::invalid_argument("bridge: eps must be positive");
        double tr = 0.0;
        for (std::int64_t k = 0; k < n; ++k)
            if (bn[k] >= eps) tr += a[k];
        rep.eps_family.emplace_back(eps, eps * tr);
    }
    std::size_t ne = rep.eps_family.size();
    std::size_t take = std::min<std::size_t>(3, ne);
    double acc = 0.0;
    for (std::size_t i = ne - take; i < ne; ++i) acc += rep.eps_family[i].second;
    rep.eps_value = acc / take;

    // report on the original (unnormalized) scale
    rep.s_value *= rep.scale;
    rep.eps_value *= rep.scale;
    for (auto& [svl, v] : rep.s_family) v *= rep.scale;
    for (auto& [evl, v] : rep.eps_family) v *= rep.scale;
    rep.gap = std::fabs(rep.s_value - rep.eps_value);
    return rep;
}

AltReport alt_inequality_fuzz(int n_max, int trials, double r, std::uint64_t seed) {
    if (!(r > 1.0)) throw std::invalid_argument("alt fuzz: r > 1");
    if (trials < 100) throw std::invalid_argument("alt fuzz: trials >= 100");
    if (n_max < 2 || n_max > 512)
        throw std::invalid_argument("alt fuzz: 2 <= n_max <= 512");

    std::vector<double> ratios(trials, 0.0);
    parallel::parallel_for(trials, [&](std::int64_t trial) {
        const std::uint64_t tu = static_cast<std::uint64_t>(trial);
        int n = 2 + static_cast<int>(rng::mix(seed, 7777, tu) % (n_max - 1));
        auto draw_psd = [&](std::uint64_t stream) {
            MatrixXd G(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    G(i, j) = rng::gaussian(seed, stream,
                                            tu * static_cast<std::uint64_t>(n) * n +
                                                static_cast<std::uint64_t>(i) * n + j);
            return MatrixXd((G.transpose() * G) / n);
        };
        MatrixXd A = draw_psd(11), B = draw_psd(13);

        auto weak_norm = [](const std::vector<double>& sv, double p) {
            double sup = 0.0;
            for (std::size_t k = 0; k < sv.size(); ++k)
                sup = std::max(sup, std::pow(k + 1.0, 1.0 / p) * sv[k]);
            return sup;
        };
        auto psd_power = [](const MatrixXd& M, double e) {
            auto eig = dense::sym_eigen(M);
            Eigen::VectorXd lam(M.rows());
            for (std::int64_t i = 0; i < M.rows(); ++i)
                lam[i] = std::pow(std::max(eig.values[i], 0.0), e);
            return MatrixXd(eig.vectors * lam.asDiagonal() * eig.vectors.transpose());
        };

        double lhs = std::pow(weak_norm(dense::singular_values(MatrixXd(A * B)), r), r);
        MatrixXd ArBr = psd_power(A, r) * psd_power(B, r);
        double rhs = std::exp(1.0) * weak_norm(dense::singular_values(ArBr), 1.0);
        ratios[trial] = rhs > 0.0 ? lhs / rhs : 0.0;
    });
    AltReport rep;
    rep.trials = trials;
    for (double q : ratios) {
        rep.worst_ratio = std::max(rep.worst_ratio, q);
        if (q > 1.0 + 1e-10) rep.violations++;
    }
    return rep;
}

}  // namespace dostrace::verify
