#include "dostrace/seq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace dostrace::seq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SingularSequence::SingularSequence(std::vector<double> values)
    : values_(std::move(values)) {
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!(values_[k] >= 0.0))
            throw std::invalid_argument("SingularSequence: negative entry at " +
                                        std::to_string(k));
        if (k > 0 && values_[k] > values_[k - 1])
            throw std::invalid_argument("SingularSequence: not non-increasing at " +
                                        std::to_string(k));
    }
}

SingularSequence decreasing_rearrangement(const std::vector<double>& values) {
    std::vector<double> abs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) abs[i] = std::fabs(values[i]);
    std::sort(abs.begin(), abs.end(), std::greater<double>());
    return SingularSequence(std::move(abs));
}

double lorentz_quasinorm(const SingularSequence& seq, QuasiNormParams params) {
    if (!(params.p > 0.0) || !(params.q > 0.0))
        throw std::invalid_argument("lorentz_quasinorm: p and q must be positive");
    const auto& mu = seq.values();
    const bool pinf = std::isinf(params.p);
    const bool qinf = std::isinf(params.q);
    if (qinf) {
        if (pinf) return mu.empty() ? 0.0 : mu.front();
        double sup = 0.0;
        for (std::size_t k = 0; k < mu.size(); ++k)
            sup = std::max(sup, std::pow(k + 1.0, 1.0 / params.p) * mu[k]);
        return sup;
    }
    const double expo = pinf ? -1.0 : params.q / params.p - 1.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        if (mu[k] == 0.0) continue;
        acc += std::pow(k + 1.0, expo) * std::pow(mu[k], params.q);
    }
    return std::pow(acc, 1.0 / params.q);
}

std::vector<double> eigenvalue_order(std::vector<double> values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        double fa = std::fabs(values[a]), fb = std::fabs(values[b]);
        if (fa != fb) return fa > fb;
        return values[a] > values[b];
    });
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = values[idx[i]];
    return out;
}

std::vector<double> log_cesaro_means(const std::vector<double>& seq) {
    std::vector<double> out(seq.size());
    double partial = 0.0;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        partial += seq[n];
        out[n] = partial / std::log(2.0 + static_cast<double>(n));
    }
    return out;
}

ExtendedLimitSurrogate ExtendedLimitSurrogate::last_value() {
    ExtendedLimitSurrogate s;
    s.kind = Kind::LastValue;
    return s;
}
ExtendedLimitSurrogate ExtendedLimitSurrogate::tail_mean(double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("tail_mean: fraction must be in (0,1]");
    ExtendedLimitSurrogate s;
    s.kind = Kind::TailMean;
    s.fraction = fraction;
    return s;
}
ExtendedLimitSurrogate ExtendedLimitSurrogate::dyadic_agreement(double tolerance) {
    if (!(tolerance > 0.0))
        throw std::invalid_argument("dyadic_agreement: tolerance must be positive");
    ExtendedLimitSurrogate s;
    s.kind = Kind::DyadicAgreement;
    s.tolerance = tolerance;
    return s;
}
ExtendedLimitSurrogate ExtendedLimitSurrogate::log_extrapolation(int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("log_extrapolation: order must be 1 or 2");
    ExtendedLimitSurrogate s;
    s.kind = Kind::LogExtrapolation;
    s.order = order;
    return s;
}

namespace {

// Dyadic indices 2^j in [32, max(64, L/4)]. The upper cut keeps the fit away
// from the truncation-depressed tail of the means.
std::vector<std::size_t> fit_window(std::size_t L) {
    std::vector<std::size_t> idx;
    std::size_t hi = std::max<std::size_t>(64, L / 4);
    for (std::size_t v = 32; v <= hi && v < L; v *= 2) idx.push_back(v);
    if (idx.size() < 3) {
        idx.clear();
        for (std::size_t v = 4; v < L; v *= 2) idx.push_back(v);
    }
    return idx;
}

double fit_intercept(const std::vector<double>& means,
                     const std::vector<std::size_t>& idx, int order) {
    // Least squares of means[N] against {1, x, (x^2)} with x = 1/log(2+N).
    const int m = order + 1;
    double ata[9] = {0}, atb[3] = {0};
    for (std::size_t N : idx) {
        double x = 1.0 / std::log(2.0 + static_cast<double>(N));
        double row[3] = {1.0, x, x * x};
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) ata[i * 3 + j] += row[i] * row[j];
            atb[i] += row[i] * means[N];
        }
    }
    // Gaussian elimination on the tiny normal system.
    double a[3][4];
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) a[i][j] = ata[i * 3 + j];
        a[i][m] = atb[i];
    }
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (int r = 0; r < m; ++r) {
            if (r == c || a[c][c] == 0.0) continue;
            double f = a[r][c] / a[c][c];
            for (int j = c; j <= m; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return a[0][0] == 0.0 ? means.back() : a[0][m] / a[0][0];
}

}  // namespace

DixmierEstimate dixmier_estimate(const std::vector<double>& seq,
                                 const ExtendedLimitSurrogate& surrogate) {
    if (seq.size() < 16)
        throw std::invalid_argument("dixmier_estimate: insufficient data (need >= 16)");
    DixmierEstimate est;
    est.means = log_cesaro_means(seq);
    const std::size_t L = est.means.size();

    switch (surrogate.kind) {
        case ExtendedLimitSurrogate::Kind::LastValue:
            est.value = est.means.back();
            break;
        case ExtendedLimitSurrogate::Kind::TailMean: {
            std::size_t start = static_cast<std::size_t>(
                std::ceil(static_cast<double>(L) * (1.0 - surrogate.fraction)));
            if (start >= L) start = L - 1;
            double acc = 0.0;
            for (std::size_t i = start; i < L; ++i) acc += est.means[i];
            est.value = acc / static_cast<double>(L - start);
            break;
        }
        case ExtendedLimitSurrogate::Kind::DyadicAgreement: {
            std::vector<double> dy;
            for (std::size_t v = 2; v < L; v *= 2) dy.push_back(est.means[v]);
            std::size_t take = std::min<std::size_t>(3, dy.size());
            double acc = 0.0;
            for (std::size_t i = dy.size() - take; i < dy.size(); ++i) acc += dy[i];
            est.value = acc / static_cast<double>(take);
            break;
        }
        case ExtendedLimitSurrogate::Kind::LogExtrapolation:
            est.value = fit_intercept(est.means, fit_window(L), surrogate.order);
            break;
    }

    // Diagnostic window: last 20% of indices plus dyadic indices therein
    // (the dyadic points are a subset of the range, kept for clarity).
    std::size_t start = static_cast<std::size_t>(
        std::ceil(static_cast<double>(L) * 0.8));
    if (start >= L) start = L - 1;
    double lo = kInf, hi = -kInf;
    for (std::size_t i = start; i < L; ++i) {
        lo = std::min(lo, est.means[i]);
        hi = std::max(hi, est.means[i]);
    }
    est.spread = hi - lo;
    double tol = surrogate.tolerance * std::max(1.0, std::fabs(est.value));
    est.converged = est.spread <= tol;
    return est;
}

SingularSequence direct_sum_singular_values(
    const std::vector<SingularSequence>& parts) {
    // k-way merge by max-heap over the current head of each part.
    using Head = std::pair<double, std::size_t>;  // value, part index
    std::vector<std::size_t> pos(parts.size(), 0);
    std::priority_queue<Head> heap;
    std::size_t total = 0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        total += parts[j].size();
        if (!parts[j].empty()) heap.emplace(parts[j][0], j);
    }
    std::vector<double> out;
    out.reserve(total);
    while (!heap.empty()) {
        auto [v, j] = heap.top();
        heap.pop();
        out.push_back(v);
        if (++pos[j] < parts[j].size()) heap.emplace(parts[j][pos[j]], j);
    }
    return SingularSequence(std::move(out));
}

double riemann_zeta(double s) {
    if (!(s > 1.0)) throw std::invalid_argument("riemann_zeta: requires s > 1");
    // Euler-Maclaurin with M = 24 and 10 Bernoulli correction terms.
    constexpr int M = 24;
    // B_2, B_4, ..., B_20
    static const double bern[10] = {
        1.0 / 6,      -1.0 / 30,    1.0 / 42,      -1.0 / 30,    5.0 / 66,
        -691.0 / 2730, 7.0 / 6,     -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};
    double acc = 0.0;
    for (int k = 1; k < M; ++k) acc += std::pow(k, -s);
    acc += std::pow(M, 1.0 - s) / (s - 1.0);
    acc += 0.5 * std::pow(M, -s);
    double factor = s;            // s(s+1)...(s+2j-2) built incrementally
    double mpow = std::pow(M, -s - 1.0);
    double fact = 2.0;            // (2j)!
    for (int j = 1; j <= 10; ++j) {
        acc += bern[j - 1] * factor * mpow / fact;
        factor *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        mpow /= static_cast<double>(M) * M;
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return acc;
}

ZetaReport zeta_inequality_check(const SingularSequence& seq, double q) {
    if (!(q > 0.0))
        throw std::invalid_argument("zeta_inequality_check: q must be positive");
    ZetaReport rep;
    const auto& mu = seq.values();
    for (std::size_t k = 0; k < mu.size(); ++k) rep.lhs += mu[k] / (k + 1.0);
    double weak = lorentz_quasinorm(seq, {q, kInf});
    rep.rhs = weak * riemann_zeta(1.0 + 1.0 / q);
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12);
    return rep;
}

}  // namespace dostrace::seq
