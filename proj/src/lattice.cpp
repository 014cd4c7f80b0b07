#include "dostrace/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dostrace/seq.hpp"

namespace dostrace::lattice {

LatticeGeometry::LatticeGeometry(std::vector<int> extents, Metric metric,
                                 Boundary boundary, std::int64_t site_cap)
    : extents_(std::move(extents)), metric_(metric), boundary_(boundary) {
    if (extents_.empty()) throw std::invalid_argument("geometry: empty extents");
    nsites_ = 1;
    for (int e : extents_) {
        if (e < 1) throw std::invalid_argument("geometry: extents must be >= 1");
        nsites_ *= e;
        if (nsites_ > site_cap)
            throw std::invalid_argument("geometry: site count exceeds cap");
    }
    basepoint_.resize(extents_.size());
    for (std::size_t a = 0; a < extents_.size(); ++a) basepoint_[a] = extents_[a] / 2;
    strides_.assign(extents_.size(), 1);
    for (int a = static_cast<int>(extents_.size()) - 2; a >= 0; --a)
        strides_[a] = strides_[a + 1] * extents_[a + 1];
}

std::int64_t LatticeGeometry::site_index(const std::vector<int>& coords) const {
    std::int64_t idx = 0;
    for (std::size_t a = 0; a < extents_.size(); ++a) idx += coords[a] * strides_[a];
    return idx;
}

std::vector<int> LatticeGeometry::site_coords(std::int64_t index) const {
    std::vector<int> c(extents_.size());
    for (std::size_t a = 0; a < extents_.size(); ++a) {
        c[a] = static_cast<int>(index / strides_[a]);
        index %= strides_[a];
    }
    return c;
}

std::int64_t LatticeGeometry::distance2(std::int64_t a, std::int64_t b) const {
    std::int64_t acc = 0;
    std::int64_t ia = a, ib = b;
    for (std::size_t ax = 0; ax < extents_.size(); ++ax) {
        int ca = static_cast<int>(ia / strides_[ax]); ia %= strides_[ax];
        int cb = static_cast<int>(ib / strides_[ax]); ib %= strides_[ax];
        std::int64_t d = std::abs(ca - cb);
        if (boundary_ == Boundary::Periodic) d = std::min(d, extents_[ax] - d);
        acc += metric_ == Metric::Euclidean ? d * d : d;
    }
    return acc;
}

std::int64_t LatticeGeometry::distance2_from_basepoint(std::int64_t site) const {
    return distance2(site, site_index(basepoint_));
}

std::vector<std::int64_t> LatticeGeometry::neighbors(std::int64_t site) const {
    std::vector<std::int64_t> out;
    out.reserve(2 * extents_.size());
    auto c = site_coords(site);
    for (std::size_t a = 0; a < extents_.size(); ++a) {
        for (int dir : {-1, +1}) {
            int v = c[a] + dir;
            if (v < 0 || v >= extents_[a]) {
                if (boundary_ == Boundary::Dirichlet) continue;
                if (extents_[a] == 1) continue;
                v = (v + extents_[a]) % extents_[a];
            }
            out.push_back(site + (static_cast<std::int64_t>(v) - c[a]) * strides_[a]);
        }
    }
    return out;
}

bool LatticeGeometry::in_ball(std::int64_t site, double R) const {
    if (R < 0.0) return false;
    std::int64_t proxy = distance2_from_basepoint(site);
    if (metric_ == Metric::Euclidean) {
        // closed ball d <= R as integer comparison d^2 <= floor(R^2 + eps)
        double r2 = R * R;
        auto thr = static_cast<std::int64_t>(std::floor(r2 + 1e-9 * std::max(1.0, r2)));
        return proxy <= thr;
    }
    auto thr = static_cast<std::int64_t>(std::floor(R + 1e-9 * std::max(1.0, R)));
    return proxy <= thr;
}

std::int64_t LatticeGeometry::ball_volume(double R) const {
    if (!(R >= 0.0)) throw std::invalid_argument("ball_volume: R >= 0");
    std::int64_t count = 0;
    for (std::int64_t s = 0; s < nsites_; ++s)
        if (in_ball(s, R)) ++count;
    return count;
}

std::vector<bool> LatticeGeometry::ball_indicator(double R) const {
    if (!(R >= 0.0)) throw std::invalid_argument("ball_indicator: R >= 0");
    std::vector<bool> mask(nsites_);
    for (std::int64_t s = 0; s < nsites_; ++s) mask[s] = in_ball(s, R);
    return mask;
}

const std::vector<std::int64_t>& LatticeGeometry::achieved_distances() const {
    if (achieved_.empty()) {
        std::vector<std::int64_t> vals(nsites_);
        for (std::int64_t s = 0; s < nsites_; ++s) vals[s] = distance2_from_basepoint(s);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        achieved_ = std::move(vals);
    }
    return achieved_;
}

double LatticeGeometry::radius_of(std::int64_t proxy) const {
    return metric_ == Metric::Euclidean ? std::sqrt(static_cast<double>(proxy))
                                        : static_cast<double>(proxy);
}

WeightField::WeightField(const LatticeGeometry& geom) {
    basepoint_site_ = geom.site_index(geom.basepoint());
    // |B| per achieved distance, then per-site lookup
    const auto& dist = geom.achieved_distances();
    std::vector<std::int64_t> counts(dist.size(), 0);
    std::vector<std::int64_t> proxy(geom.num_sites());
    for (std::int64_t s = 0; s < geom.num_sites(); ++s) {
        proxy[s] = geom.distance2_from_basepoint(s);
        auto it = std::lower_bound(dist.begin(), dist.end(), proxy[s]);
        counts[static_cast<std::size_t>(it - dist.begin())]++;
    }
    std::vector<double> w_of_dist(dist.size());
    std::int64_t cum = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        cum += counts[i];
        w_of_dist[i] = 1.0 / (1.0 + static_cast<double>(cum));
    }
    values_.resize(geom.num_sites());
    for (std::int64_t s = 0; s < geom.num_sites(); ++s) {
        auto it = std::lower_bound(dist.begin(), dist.end(), proxy[s]);
        values_[s] = w_of_dist[static_cast<std::size_t>(it - dist.begin())];
    }
    achieved_ = w_of_dist;  // already descending: |B| grows with distance
    std::sort(achieved_.begin(), achieved_.end(), std::greater<double>());
}

std::vector<bool> WeightField::superlevel_mask(double eps) const {
    std::vector<bool> mask(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) mask[i] = values_[i] >= eps;
    return mask;
}

CellDecomposition CellDecomposition::singletons(const LatticeGeometry& geom) {
    CellDecomposition c;
    c.ncells_ = geom.num_sites();
    c.cell_of_.resize(geom.num_sites());
    for (std::int64_t s = 0; s < geom.num_sites(); ++s) c.cell_of_[s] = s;
    return c;
}

CellDecomposition CellDecomposition::blocks(const LatticeGeometry& geom, int side) {
    if (side < 1) throw std::invalid_argument("blocks: side >= 1");
    CellDecomposition c;
    const auto& ext = geom.extents();
    std::vector<int> nblk(ext.size());
    std::int64_t ncells = 1;
    for (std::size_t a = 0; a < ext.size(); ++a) {
        nblk[a] = (ext[a] + side - 1) / side;
        ncells *= nblk[a];
    }
    c.ncells_ = ncells;
    c.cell_of_.resize(geom.num_sites());
    for (std::int64_t s = 0; s < geom.num_sites(); ++s) {
        auto coords = geom.site_coords(s);
        std::int64_t cell = 0;
        for (std::size_t a = 0; a < ext.size(); ++a)
            cell = cell * nblk[a] + coords[a] / side;
        c.cell_of_[s] = cell;
    }
    return c;
}

double ell_p_infty_Linfty_norm(const std::vector<double>& field,
                               const CellDecomposition& cells, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("ell_p_infty_Linfty_norm: p > 0");
    std::vector<double> sup(cells.num_cells(), 0.0);
    for (std::size_t s = 0; s < field.size(); ++s) {
        auto c = cells.cell_of(static_cast<std::int64_t>(s));
        sup[c] = std::max(sup[c], std::fabs(field[s]));
    }
    auto mu = seq::decreasing_rearrangement(sup);
    return seq::lorentz_quasinorm(mu, {p, std::numeric_limits<double>::infinity()});
}

}  // namespace dostrace::lattice
