#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dostrace::lattice {

enum class Metric { Euclidean, GraphL1 };
enum class Boundary { Dirichlet, Periodic };

// Finite box of integer lattice sites, basepoint at the (floored) center.
// Distances are exact: comparisons run on the integer squared distance
// (Euclidean) or the integer L1 distance, so ball boundaries never depend on
// floating-point ties. Immutable after construction.
class LatticeGeometry {
  public:
    LatticeGeometry(std::vector<int> extents, Metric metric, Boundary boundary,
                    std::int64_t site_cap = 1 << 24);

    int dim() const { return static_cast<int>(extents_.size()); }
    const std::vector<int>& extents() const { return extents_; }
    Metric metric() const { return metric_; }
    Boundary boundary() const { return boundary_; }
    std::int64_t num_sites() const { return nsites_; }
    const std::vector<int>& basepoint() const { return basepoint_; }

    std::int64_t site_index(const std::vector<int>& coords) const;
    std::vector<int> site_coords(std::int64_t index) const;

    // Squared Euclidean / plain L1 distance from the basepoint, as an exact
    // integer (periodic boundaries use the minimum image).
    std::int64_t distance2_from_basepoint(std::int64_t site) const;
    // Same quantity between two sites.
    std::int64_t distance2(std::int64_t a, std::int64_t b) const;

    // Neighbor list (face-adjacent); Dirichlet drops out-of-box edges,
    // Periodic wraps.
    std::vector<std::int64_t> neighbors(std::int64_t site) const;

    // Closed-ball membership with exact integer comparison.
    bool in_ball(std::int64_t site, double R) const;

    // |B(x0, R)|, counting measure.
    std::int64_t ball_volume(double R) const;
    std::vector<bool> ball_indicator(double R) const;

    // Sorted distinct values of the distance proxy (d^2 for Euclidean, d for
    // graph-L1) achieved on the box.
    const std::vector<std::int64_t>& achieved_distances() const;
    // Real-valued radius corresponding to an achieved proxy value.
    double radius_of(std::int64_t proxy) const;

  private:
    std::vector<int> extents_;
    Metric metric_;
    Boundary boundary_;
    std::int64_t nsites_ = 0;
    std::vector<int> basepoint_;
    std::vector<std::int64_t> strides_;
    mutable std::vector<std::int64_t> achieved_;  // lazily filled, then const
};

// Per-site w(x) = 1/(1 + |B(x0, d(x,x0))|); values in (0,1], radially
// non-increasing by construction.
class WeightField {
  public:
    explicit WeightField(const LatticeGeometry& geom);

    const std::vector<double>& values() const { return values_; }
    double operator[](std::int64_t i) const { return values_[i]; }
    std::int64_t basepoint_site() const { return basepoint_site_; }
    // Sorted distinct achieved values, descending.
    const std::vector<double>& achieved_values() const { return achieved_; }
    // Level-set mask {w >= eps}.
    std::vector<bool> superlevel_mask(double eps) const;

  private:
    std::vector<double> values_;
    std::vector<double> achieved_;
    std::int64_t basepoint_site_;
};

// Partition of the site set: singleton cells by default, or cubic blocks of
// side b aligned to the box origin.
class CellDecomposition {
  public:
    static CellDecomposition singletons(const LatticeGeometry& geom);
    static CellDecomposition blocks(const LatticeGeometry& geom, int side);

    std::int64_t num_cells() const { return ncells_; }
    std::int64_t cell_of(std::int64_t site) const { return cell_of_[site]; }

  private:
    std::int64_t ncells_ = 0;
    std::vector<std::int64_t> cell_of_;
};

// Per-cell sup |field|, decreasing rearrangement, then the (p, inf) Lorentz
// quasinorm.
double ell_p_infty_Linfty_norm(const std::vector<double>& field,
                               const CellDecomposition& cells, double p);

}  // namespace dostrace::lattice
