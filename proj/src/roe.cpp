#include "dostrace/roe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dostrace/dense.hpp"
#include "dostrace/dos.hpp"
#include "dostrace/lattice.hpp"

namespace dostrace::roe {

using operators::GradedDiracPair;

namespace {

struct SquareEigs {
    dense::HermEig plus;
    dense::HermEig minus;
};

SquareEigs diagonalize_squares(const GradedDiracPair& pair) {
    return {dense::herm_eigen(pair.square_plus()),
            dense::herm_eigen(pair.square_minus())};
}

lattice::LatticeGeometry torus_geometry(const GradedDiracPair& pair) {
    return lattice::LatticeGeometry({pair.Lx(), pair.Ly()},
                                    lattice::Metric::Euclidean,
                                    lattice::Boundary::Periodic);
}

// Heat trace of an eigensystem against a site mask: sum_k e^{-t l_k} rho_k(B).
double masked_heat_trace(const dense::HermEig& eig, double t,
                         const std::vector<bool>& mask,
                         const std::vector<std::int64_t>* site_map) {
    const auto n = eig.vectors.rows();
    double acc = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        double rho = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            std::int64_t site = site_map ? (*site_map)[i] : i;
            if (mask[site]) rho += std::norm(eig.vectors(i, k));
        }
        acc += std::exp(-t * eig.values[k]) * rho;
    }
    return acc;
}

std::vector<double> default_radii(const lattice::LatticeGeometry& geom) {
    const auto& dists = geom.achieved_distances();
    if (dists.size() < 2) return {geom.radius_of(dists.back()) + 1.0};
    double r_full = geom.radius_of(dists.back());
    double r_prev = geom.radius_of(dists[dists.size() - 2]);
    return {r_prev, r_full, r_full + 1.0};
}

}  // namespace

SupertraceResult supertrace_weighted(const GradedDiracPair& pair,
                                     const std::vector<double>& ts,
                                     const BallAverageMode& mode) {
    if (ts.empty()) throw std::invalid_argument("supertrace: t list empty");
    auto geom = torus_geometry(pair);
    std::vector<double> radii = mode.radii.empty() ? default_radii(geom) : mode.radii;
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("supertrace: radii must increase");
    auto eigs = diagonalize_squares(pair);

    SupertraceResult out;
    out.mode = "ball-average";
    out.ts = ts;
    for (double t : ts) {
        std::vector<std::pair<double, double>> appr;
        for (double R : radii) {
            auto mask = geom.ball_indicator(R);
            std::int64_t vol = 0;
            for (std::int64_t s = 0; s < geom.num_sites(); ++s)
                if (mask[s]) ++vol;
            if (vol == 0) throw std::invalid_argument("supertrace: empty ball");
            double trp = masked_heat_trace(eigs.plus, t, mask, nullptr);
            double trm = masked_heat_trace(eigs.minus, t, mask, &pair.minus_sites());
            appr.emplace_back(R, (trp - trm) / static_cast<double>(vol));
        }
        std::size_t na = appr.size();
        std::size_t take = std::min<std::size_t>(3, na);
        double acc = 0.0;
        for (std::size_t i = na - take; i < na; ++i) acc += appr[i].second;
        out.values.push_back(acc / static_cast<double>(take));
        out.approximants.push_back(std::move(appr));
    }
    double lo = *std::min_element(out.values.begin(), out.values.end());
    double hi = *std::max_element(out.values.begin(), out.values.end());
    double mean = 0.0;
    for (double v : out.values) mean += v;
    mean /= static_cast<double>(out.values.size());
    out.max_relative_deviation = (hi - lo) / std::max(std::fabs(mean), 1e-300);
    return out;
}

SupertraceResult supertrace_weighted(const GradedDiracPair& pair,
                                     const std::vector<double>& ts,
                                     const DixmierMode& mode) {
    if (ts.empty()) throw std::invalid_argument("supertrace: t list empty");
    auto geom = torus_geometry(pair);
    lattice::WeightField weights(geom);
    auto eigs = diagonalize_squares(pair);

    auto dixmier_of = [&](const dense::HermEig& eig,
                          const std::vector<std::int64_t>* site_map, double t) {
        const auto n = eig.vectors.rows();
        // K = W^{1/2} e^{-tH} W^{1/2} in the eigenbasis: same nonzero
        // spectrum as the weighted heat operator.
        Eigen::VectorXd sqrtw(n);
        for (std::int64_t i = 0; i < n; ++i) {
            std::int64_t site = site_map ? (*site_map)[i] : i;
            sqrtw[i] = std::sqrt(weights[site]);
        }
        Eigen::Map<const Eigen::VectorXd> lam(eig.values.data(), n);
        Eigen::MatrixXcd E = eig.vectors *
                             (-t * lam.array()).exp().matrix().asDiagonal() *
                             eig.vectors.adjoint();
        Eigen::MatrixXcd K = sqrtw.asDiagonal() * E * sqrtw.asDiagonal();
        std::vector<double> ev = dense::herm_eigenvalues(std::move(K));
        auto ordered = seq::eigenvalue_order(std::move(ev));
        return seq::dixmier_estimate(ordered, mode.surrogate).value;
    };

    SupertraceResult out;
    out.mode = "dixmier";
    out.ts = ts;
    for (double t : ts)
        out.values.push_back(dixmier_of(eigs.plus, nullptr, t) -
                             dixmier_of(eigs.minus, &pair.minus_sites(), t));
    double lo = *std::min_element(out.values.begin(), out.values.end());
    double hi = *std::max_element(out.values.begin(), out.values.end());
    double mean = 0.0;
    for (double v : out.values) mean += v;
    mean /= static_cast<double>(out.values.size());
    out.max_relative_deviation = (hi - lo) / std::max(std::fabs(mean), 1e-300);
    return out;
}

double raw_supertrace(const GradedDiracPair& pair, double t) {
    auto evp = dense::herm_eigenvalues(pair.square_plus());
    auto evm = dense::herm_eigenvalues(pair.square_minus());
    double acc = 0.0;
    for (double l : evp) acc += std::exp(-t * l);
    for (double l : evm) acc -= std::exp(-t * l);
    return acc;
}

ZeroModeReport zero_mode_index(const operators::GradedDiracPair& pair) {
    if (pair.plus_dim() > operators::kNExact)
        throw operators::CapabilityError("zero_mode_index: exact path only");
    auto sv = dense::singular_values(pair.d_plus());
    ZeroModeReport rep;
    if (sv.empty()) {
        rep.dim_ker_plus = static_cast<int>(pair.plus_dim());
        rep.dim_ker_minus = static_cast<int>(pair.minus_dim());
        rep.index = rep.dim_ker_plus - rep.dim_ker_minus;
        return rep;
    }
    rep.threshold = 1e-8 * sv.front();
    int rank = 0;
    for (double s : sv) {
        if (s >= rep.threshold) ++rank;
        if (s >= rep.threshold && s < 10.0 * rep.threshold) rep.ambiguous = true;
    }
    rep.dim_ker_plus = static_cast<int>(pair.plus_dim()) - rank;
    rep.dim_ker_minus = static_cast<int>(pair.minus_dim()) - rank;
    rep.index = rep.dim_ker_plus - rep.dim_ker_minus;
    return rep;
}

double t_independence_scan(const operators::GradedDiracPair& pair,
                           const std::vector<double>& t_list,
                           const BallAverageMode& mode) {
    if (t_list.size() < 3)
        throw std::invalid_argument("t_independence_scan: need at least 3 t values");
    return supertrace_weighted(pair, t_list, mode).max_relative_deviation;
}

}  // namespace dostrace::roe
