#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dostrace/dense.hpp"
#include "dostrace/kernels.hpp"
#include "dostrace/operators.hpp"
#include "dostrace/parallel.hpp"
#include "dostrace/rng.hpp"

namespace dostrace::operators {

namespace {

// Scaled modified Bessel values b_k = I_k(z) e^{-z}, k = 0..len-1, by
// Miller's downward recurrence with on-the-fly rescaling.
std::vector<double> bessel_i_scaled(double z, int len) {
    std::vector<double> b(len, 0.0);
    if (z <= 0.0) {
        if (len > 0) b[0] = 1.0;
        return b;
    }
    const int start = len + 20 + static_cast<int>(std::ceil(std::sqrt(z)));
    std::vector<double> y(start + 2, 0.0);
    y[start + 1] = 0.0;
    y[start] = 1e-280;
    for (int k = start; k >= 1; --k) {
        y[k - 1] = y[k + 1] + (2.0 * k / z) * y[k];
        if (y[k - 1] > 1e270) {
            for (int j = k - 1; j <= start + 1; ++j) y[j] *= 1e-270;
        }
    }
    double norm = y[0];
    for (int k = 1; k <= start; ++k) norm += 2.0 * y[k];
    for (int k = 0; k < len; ++k) b[k] = y[k] / norm;
    return b;
}

}  // namespace

struct HeatApplier::EigCache {
    dense::SymEig eig;
};

HeatApplier::HeatApplier(const SparseHermitianOperator& op, Method method,
                         double tol)
    : op_(op), method_(method), tol_(tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("HeatApplier: tol > 0");
    if (method_ == Method::Auto)
        method_ = op.dimension() <= kDenseEigCut ? Method::ExactEig : Method::Chebyshev;
    if (method_ == Method::ExactEig) {
        if (op.dimension() > kNExact)
            throw CapabilityError(
                "HeatApplier: exact-eig path capped at N <= 4096; use Chebyshev");
        eig_ = std::make_shared<EigCache>();
        eig_->eig = dense::sym_eigen(op.to_dense());
    } else {
        bounds_ = op.spectral_bounds();
    }
}

std::vector<double> HeatApplier::cheb_coeffs(double t) const {
    const double c = 0.5 * (bounds_.hi + bounds_.lo);
    const double r = 0.5 * (bounds_.hi - bounds_.lo);
    const double z = t * r;
    const double scale = std::exp(-t * bounds_.lo);  // = e^{z - t c}
    if (z <= 1e-14) return {scale};

    // Enough Miller length that the certified tail is visible.
    int len = static_cast<int>(std::ceil(z + 14.0 * std::sqrt(z + 1.0) + 40.0));
    len = std::min(len, 8192);
    std::vector<double> b = bessel_i_scaled(z, len);

    // Smallest K with 2 sum_{k>K} b_k <= tol/2, then a 2x safety margin.
    std::vector<double> tail(len + 1, 0.0);
    for (int k = len - 1; k >= 0; --k) tail[k] = tail[k + 1] + b[k];
    int K = len - 1;
    for (int k = 0; k < len; ++k) {
        if (2.0 * tail[k + 1] <= 0.5 * tol_) {
            K = k;
            break;
        }
    }
    int degree = std::min({2 * K, len - 1, 4096});
    std::vector<double> coeffs(degree + 1);
    for (int k = 0; k <= degree; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        coeffs[k] = (k == 0 ? 1.0 : 2.0) * sign * b[k] * scale;
    }
    return coeffs;
}

int HeatApplier::degree(double t) const {
    if (method_ == Method::ExactEig) return 0;
    return static_cast<int>(cheb_coeffs(t).size()) - 1;
}

Eigen::VectorXd HeatApplier::cheb_apply(double t, const Eigen::VectorXd& v) const {
    const auto n = static_cast<std::size_t>(v.size());
    std::vector<double> coeffs = cheb_coeffs(t);
    const double c = 0.5 * (bounds_.hi + bounds_.lo);
    const double r = std::max(0.5 * (bounds_.hi - bounds_.lo), 1e-300);
    const auto& k = kernels::active();

    Eigen::VectorXd acc = coeffs[0] * v;
    if (coeffs.size() == 1) return acc;

    // T_0 = v, T_1 = (P v - c v)/r, T_{j+1} = (2/r)(P T_j - c T_j) - T_{j-1}
    Eigen::VectorXd t_prev = v;
    Eigen::VectorXd pv(v.size());
    op_.apply(v.data(), pv.data());
    Eigen::VectorXd t_cur = (pv - c * v) / r;
    k.axpy(coeffs[1], t_cur.data(), acc.data(), n);
    for (std::size_t j = 2; j < coeffs.size(); ++j) {
        op_.apply(t_cur.data(), pv.data());
        // t_prev <- (2/r) pv - (2c/r) t_cur - t_prev
        k.cheb_combine(2.0 / r, pv.data(), -2.0 * c / r, t_cur.data(),
                       t_prev.data(), n);
        std::swap(t_prev, t_cur);
        k.axpy(coeffs[j], t_cur.data(), acc.data(), n);
    }
    return acc;
}

Eigen::VectorXd HeatApplier::apply(double t, const Eigen::VectorXd& v) const {
    if (t < 0.0) throw std::invalid_argument("heat_apply: t must be >= 0");
    if (t == 0.0) return v;
    if (method_ == Method::ExactEig) {
        const auto& eig = eig_->eig;
        Eigen::Map<const Eigen::VectorXd> lam(eig.values.data(),
                                              static_cast<std::int64_t>(eig.values.size()));
        Eigen::VectorXd proj = eig.vectors.transpose() * v;
        proj.array() *= (-t * lam.array()).exp();
        return eig.vectors * proj;
    }
    return cheb_apply(t, v);
}

std::vector<double> HeatApplier::diagonal(double t,
                                          const std::vector<std::int64_t>& sites) const {
    std::vector<double> out(sites.size());
    if (t == 0.0) {
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    if (method_ == Method::ExactEig) {
        const auto& eig = eig_->eig;
        Eigen::Map<const Eigen::VectorXd> lam(eig.values.data(),
                                              static_cast<std::int64_t>(eig.values.size()));
        Eigen::VectorXd ex = (-t * lam.array()).exp();
        for (std::size_t i = 0; i < sites.size(); ++i) {
            double acc = 0.0;
            for (std::int64_t kk = 0; kk < eig.vectors.cols(); ++kk) {
                double u = eig.vectors(sites[i], kk);
                acc += u * u * ex[kk];
            }
            out[i] = acc;
        }
        return out;
    }
    parallel::parallel_for(static_cast<std::int64_t>(sites.size()), [&](std::int64_t i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(op_.dimension());
        e[sites[i]] = 1.0;
        out[i] = cheb_apply(t, e)[sites[i]];
    });
    return out;
}

TraceResult weighted_heat_trace(const SparseHermitianOperator& op, double t,
                                const std::vector<double>& diag_weight) {
    if (static_cast<std::int64_t>(diag_weight.size()) != op.dimension())
        throw std::invalid_argument("weighted_heat_trace: weight size mismatch");
    if (t < 0.0) throw std::invalid_argument("weighted_heat_trace: t >= 0");
    if (op.dimension() > kNExact)
        throw CapabilityError(
            "weighted_heat_trace: exact mode capped at N <= 4096; use stochastic mode");
    std::vector<std::int64_t> support;
    for (std::int64_t i = 0; i < op.dimension(); ++i)
        if (diag_weight[i] != 0.0) support.push_back(i);
    TraceResult res;
    if (support.empty()) return res;
    if (t == 0.0) {
        for (std::int64_t s : support) res.value += diag_weight[s];
        return res;
    }
    HeatApplier applier(op,
                        op.dimension() <= kDenseEigCut ? HeatApplier::Method::ExactEig
                                                       : HeatApplier::Method::Chebyshev,
                        1e-12);
    std::vector<double> hd = applier.diagonal(t, support);
    for (std::size_t i = 0; i < support.size(); ++i)
        res.value += diag_weight[support[i]] * hd[i];
    return res;
}

TraceResult weighted_heat_trace(const SparseHermitianOperator& op, double t,
                                const std::vector<double>& diag_weight,
                                const ProbeEnsemble& probes) {
    if (probes.n_probes < 8)
        throw std::invalid_argument("stochastic weighted_heat_trace: n_probes >= 8");
    if (static_cast<std::int64_t>(diag_weight.size()) != op.dimension())
        throw std::invalid_argument("weighted_heat_trace: weight size mismatch");
    const std::int64_t n = op.dimension();
    HeatApplier applier(op, HeatApplier::Method::Auto, 1e-10);
    std::vector<double> vals(probes.n_probes);
    parallel::parallel_for(probes.n_probes, [&](std::int64_t p) {
        Eigen::VectorXd z(n);
        for (std::int64_t i = 0; i < n; ++i) {
            auto idx = static_cast<std::uint64_t>(i);
            z[i] = probes.kind == ProbeEnsemble::Kind::Rademacher
                       ? rng::rademacher(probes.seed, static_cast<std::uint64_t>(p) + 1, idx)
                       : rng::gaussian(probes.seed, static_cast<std::uint64_t>(p) + 1, idx);
        }
        Eigen::VectorXd hz = applier.apply(t, z);
        double acc = 0.0;
        for (std::int64_t i = 0; i < n; ++i) acc += diag_weight[i] * z[i] * hz[i];
        vals[p] = acc;
    });
    TraceResult res;
    for (double v : vals) res.value += v;
    res.value /= probes.n_probes;
    double var = 0.0;
    for (double v : vals) var += (v - res.value) * (v - res.value);
    var /= std::max(1, probes.n_probes - 1);
    res.std_error = std::sqrt(var / probes.n_probes);
    return res;
}

}  // namespace dostrace::operators
