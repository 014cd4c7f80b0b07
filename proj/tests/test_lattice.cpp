#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dostrace/lattice.hpp"
#include "oracles.hpp"

using namespace dostrace::lattice;

TEST_CASE("ball volumes") {
    LatticeGeometry chain({4097}, Metric::Euclidean, Boundary::Dirichlet);
    CHECK(chain.ball_volume(3.0) == 7);  // 2R+1

    LatticeGeometry grid_l1({33, 33}, Metric::GraphL1, Boundary::Dirichlet);
    CHECK(grid_l1.ball_volume(1.0) == 5);  // von Neumann neighborhood

    LatticeGeometry grid_eu({33, 33}, Metric::Euclidean, Boundary::Dirichlet);
    CHECK(grid_eu.ball_volume(2.0) == oracles::disc_count(2.0));
    CHECK(grid_eu.ball_volume(2.0) == 13);

    // non-decreasing in R over the achieved set
    std::int64_t prev = 0;
    for (std::int64_t d2 : grid_eu.achieved_distances()) {
        std::int64_t v = grid_eu.ball_volume(grid_eu.radius_of(d2));
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("ball indicator") {
    LatticeGeometry g({9, 9}, Metric::Euclidean, Boundary::Dirichlet);
    auto m0 = g.ball_indicator(0.0);
    std::int64_t count = 0;
    for (std::int64_t s = 0; s < g.num_sites(); ++s)
        if (m0[s]) ++count;
    CHECK(count == 1);
    CHECK(m0[g.site_index(g.basepoint())]);

    auto mall = g.ball_indicator(100.0);
    for (std::int64_t s = 0; s < g.num_sites(); ++s) CHECK(mall[s]);

    auto m2 = g.ball_indicator(2.0);
    count = 0;
    for (std::int64_t s = 0; s < g.num_sites(); ++s)
        if (m2[s]) ++count;
    CHECK(count == 13);
}

TEST_CASE("weight field values against counting") {
    LatticeGeometry chain({129}, Metric::Euclidean, Boundary::Dirichlet);
    WeightField w(chain);
    CHECK(w[chain.site_index(chain.basepoint())] == doctest::Approx(0.5));
    for (int k = 1; k <= 60; ++k) {
        std::vector<int> coords = {chain.basepoint()[0] + k};
        CHECK(w[chain.site_index(coords)] ==
              doctest::Approx(1.0 / (2.0 * k + 2.0)).epsilon(1e-14));
    }
    LatticeGeometry grid({21, 21}, Metric::GraphL1, Boundary::Dirichlet);
    WeightField wg(grid);
    std::vector<int> nb = {grid.basepoint()[0] + 1, grid.basepoint()[1]};
    CHECK(wg[grid.site_index(nb)] == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("weight superlevel masks equal ball indicators (exact)") {
    for (auto metric : {Metric::Euclidean, Metric::GraphL1}) {
        for (auto boundary : {Boundary::Dirichlet, Boundary::Periodic}) {
            LatticeGeometry g({12, 17}, metric, boundary);
            WeightField w(g);
            const auto& dists = g.achieved_distances();
            REQUIRE(w.achieved_values().size() == dists.size());
            for (std::size_t i = 0; i < w.achieved_values().size(); ++i) {
                // largest weight <-> smallest distance
                double eps = w.achieved_values()[i];
                auto mask = w.superlevel_mask(eps);
                auto ball = g.ball_indicator(g.radius_of(dists[i]));
                CHECK(mask == ball);
            }
        }
    }
}

TEST_CASE("weights radially non-increasing, in (0,1]") {
    LatticeGeometry g({15, 15}, Metric::Euclidean, Boundary::Periodic);
    WeightField w(g);
    for (std::int64_t s = 0; s < g.num_sites(); ++s) {
        CHECK(w[s] > 0.0);
        CHECK(w[s] <= 0.5);
        for (std::int64_t s2 = 0; s2 < g.num_sites(); ++s2) {
            if (g.distance2_from_basepoint(s) < g.distance2_from_basepoint(s2))
                CHECK(w[s] >= w[s2]);
        }
    }
}

TEST_CASE("ell_{p,inf}(L_inf) norms") {
    // 15-site chain, singleton cells: mu = [1/2, 1/4,1/4, ..., 1/16,1/16],
    // sup (k+1) mu(k) sits at the tail: 15/16 (enumeration oracle).
    LatticeGeometry chain({15}, Metric::Euclidean, Boundary::Dirichlet);
    WeightField w(chain);
    auto cells = CellDecomposition::singletons(chain);
    double norm = ell_p_infty_Linfty_norm(w.values(), cells, 1.0);
    double oracle = 0.0;
    {
        std::vector<double> mu = w.values();
        std::sort(mu.begin(), mu.end(), std::greater<double>());
        for (std::size_t k = 0; k < mu.size(); ++k)
            oracle = std::max(oracle, (k + 1.0) * mu[k]);
    }
    CHECK(norm == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(norm == doctest::Approx(15.0 / 16.0).epsilon(1e-14));

    // constant field 1 on N=10 sites -> 10
    LatticeGeometry ten({10}, Metric::Euclidean, Boundary::Dirichlet);
    std::vector<double> ones(10, 1.0);
    CHECK(ell_p_infty_Linfty_norm(ones, CellDecomposition::singletons(ten), 1.0) ==
          doctest::Approx(10.0));

    // indicator of the basepoint -> 1 for any p
    std::vector<double> ind(10, 0.0);
    ind[5] = 1.0;
    for (double p : {0.5, 1.0, 2.0})
        CHECK(ell_p_infty_Linfty_norm(ind, CellDecomposition::singletons(ten), p) ==
              doctest::Approx(1.0));
}

TEST_CASE("weight norms approach 1 from below as the chain grows") {
    double prev = 0.0;
    for (int n : {15, 63, 255, 1023}) {
        LatticeGeometry chain({n}, Metric::Euclidean, Boundary::Dirichlet);
        WeightField w(chain);
        double norm = ell_p_infty_Linfty_norm(
            w.values(), CellDecomposition::singletons(chain), 1.0);
        CHECK(norm <= 1.0);
        CHECK(norm > prev);
        prev = norm;
    }
    CHECK(prev > 0.99);
}

TEST_CASE("block cells") {
    LatticeGeometry g({8, 8}, Metric::Euclidean, Boundary::Periodic);
    auto cells = CellDecomposition::blocks(g, 4);
    CHECK(cells.num_cells() == 4);
    // cells partition the sites
    std::vector<int> counts(cells.num_cells(), 0);
    for (std::int64_t s = 0; s < g.num_sites(); ++s) counts[cells.cell_of(s)]++;
    for (int c : counts) CHECK(c == 16);
    // block-cell norm: per-cell sup of the weight field
    WeightField w(g);
    double blocknorm = ell_p_infty_Linfty_norm(w.values(), cells, 1.0);
    CHECK(blocknorm > 0.0);
    CHECK(blocknorm <= 4.0 * 0.5);
}

TEST_CASE("periodic distances use the minimum image") {
    LatticeGeometry g({8}, Metric::Euclidean, Boundary::Periodic);
    // site 0 is 4 away from basepoint 4, site 7 is 3 away
    CHECK(g.distance2_from_basepoint(0) == 16);
    CHECK(g.distance2_from_basepoint(7) == 9);
    LatticeGeometry gd({8}, Metric::Euclidean, Boundary::Dirichlet);
    CHECK(gd.distance2_from_basepoint(0) == 16);
    CHECK(gd.distance2_from_basepoint(7) == 9);
}

TEST_CASE("site cap") {
    CHECK_THROWS_AS(LatticeGeometry({1 << 13, 1 << 13}, Metric::Euclidean,
                                    Boundary::Periodic, 1 << 24),
                    std::invalid_argument);
}
