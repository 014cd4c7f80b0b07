#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dostrace/lattice.hpp"
#include "dostrace/operators.hpp"
#include "dostrace/rng.hpp"
#include "oracles.hpp"

using namespace dostrace;
using namespace dostrace::operators;
using lattice::Boundary;
using lattice::LatticeGeometry;
using lattice::Metric;

namespace {

LatticeGeometry chain(int n, Boundary b = Boundary::Periodic) {
    return LatticeGeometry({n}, Metric::Euclidean, b);
}

std::vector<double> sorted_eigs(const SparseHermitianOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense());
    return std::vector<double>(es.eigenvalues().data(),
                               es.eigenvalues().data() + op.dimension());
}

}  // namespace

TEST_CASE("dirichlet chain laplacian has the closed-form spectrum") {
    auto op = build_lattice_laplacian(chain(3, Boundary::Dirichlet));
    auto eig = sorted_eigs(op);
    CHECK(eig[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(eig[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eig[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));

    auto big = build_lattice_laplacian(chain(48, Boundary::Dirichlet));
    auto eb = sorted_eigs(big);
    auto oracle = oracles::dirichlet_chain_eigs(48);
    std::sort(oracle.begin(), oracle.end());
    for (int i = 0; i < 48; ++i)
        CHECK(eb[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
}

TEST_CASE("periodic chain laplacian matches the DFT spectrum") {
    auto op = build_lattice_laplacian(chain(4));
    auto eig = sorted_eigs(op);
    CHECK(eig[0] == doctest::Approx(0.0));
    CHECK(eig[1] == doctest::Approx(2.0));
    CHECK(eig[2] == doctest::Approx(2.0));
    CHECK(eig[3] == doctest::Approx(4.0));

    // constant vector in the kernel: row sums vanish
    auto grid = build_lattice_laplacian(
        LatticeGeometry({6, 5}, Metric::Euclidean, Boundary::Periodic));
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(grid.dimension());
    CHECK(grid.apply(ones).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("schrodinger builders") {
    auto geom = chain(32);
    auto free_op = build_lattice_laplacian(geom);

    SUBCASE("constant potential shifts the spectrum exactly") {
        auto shifted = build_schrodinger(geom, ConstantPotential{0.7});
        auto e0 = sorted_eigs(free_op);
        auto e1 = sorted_eigs(shifted);
        for (int i = 0; i < 32; ++i)
            CHECK(e1[i] == doctest::Approx(e0[i] + 0.7).epsilon(1e-12));
    }
    SUBCASE("degenerate iid interval equals the free laplacian") {
        auto op = build_schrodinger(geom, IidUniformPotential{0.0, 0.0, 99});
        CHECK(op.matrix().values == free_op.matrix().values);
    }
    SUBCASE("iid potential is bit-reproducible") {
        auto a = build_schrodinger(geom, IidUniformPotential{0.0, 1.0, 7});
        auto b = build_schrodinger(geom, IidUniformPotential{0.0, 1.0, 7});
        CHECK(a.matrix().values == b.matrix().values);
        auto c = build_schrodinger(geom, IidUniformPotential{0.0, 1.0, 8});
        CHECK(a.matrix().values != c.matrix().values);
    }
    SUBCASE("interval validation") {
        CHECK_THROWS_AS(build_schrodinger(geom, IidUniformPotential{1.0, 0.0, 1}),
                        std::invalid_argument);
    }
}

TEST_CASE("hermiticity fuzz") {
    auto geom = LatticeGeometry({9, 7}, Metric::Euclidean, Boundary::Periodic);
    auto op = build_schrodinger(geom, IidUniformPotential{0.0, 2.0, 3});
    for (int trial = 0; trial < 40; ++trial) {
        Eigen::VectorXd u(op.dimension()), v(op.dimension());
        for (std::int64_t i = 0; i < op.dimension(); ++i) {
            u[i] = rng::uniform(51, trial, i) - 0.5;
            v[i] = rng::uniform(52, trial, i) - 0.5;
        }
        double a = u.dot(op.apply(v));
        double b = op.apply(u).dot(v);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("spectral bounds contain the spectrum") {
    SUBCASE("periodic laplacian: [0,4]") {
        auto op = build_lattice_laplacian(chain(256));
        auto b = op.spectral_bounds();
        CHECK(b.lo <= 0.0);
        CHECK(b.hi >= 4.0);
        CHECK(b.lo > -0.5);
        CHECK(b.hi < 4.5);
    }
    SUBCASE("constant shift moves both bounds") {
        auto geom = chain(128);
        auto a = build_lattice_laplacian(geom).spectral_bounds();
        auto b = build_schrodinger(geom, ConstantPotential{2.5}).spectral_bounds();
        CHECK(b.lo == doctest::Approx(a.lo + 2.5).epsilon(0.05));
        CHECK(b.hi == doctest::Approx(a.hi + 2.5).epsilon(0.05));
    }
    SUBCASE("random schrodinger N=64: bounds contain the dense spectrum") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
            auto op = build_schrodinger(chain(64),
                                        IidUniformPotential{0.0, 3.0, seed});
            auto b = op.spectral_bounds();
            auto eig = sorted_eigs(op);
            CHECK(b.lo <= eig.front() + 1e-12);
            CHECK(b.hi >= eig.back() - 1e-12);
        }
    }
}

TEST_CASE("heat applier") {
    auto geom = chain(256);
    auto op = build_lattice_laplacian(geom);
    HeatApplier cheb(op, HeatApplier::Method::Chebyshev, 1e-10);
    HeatApplier exact(op, HeatApplier::Method::ExactEig);

    SUBCASE("t=0 is the identity") {
        Eigen::VectorXd v = Eigen::VectorXd::Random(256);
        CHECK((cheb.apply(0.0, v) - v).norm() == 0.0);
        CHECK((exact.apply(0.0, v) - v).norm() == 0.0);
    }
    SUBCASE("eigenvector relation") {
        // plane wave is an eigenvector of the periodic laplacian
        Eigen::VectorXd v(256);
        const int mode = 7;
        for (int x = 0; x < 256; ++x)
            v[x] = std::cos(2.0 * M_PI * mode * x / 256.0);
        double lam = 2.0 - 2.0 * std::cos(2.0 * M_PI * mode / 256.0);
        for (double t : {0.3, 1.0}) {
            Eigen::VectorXd hv = cheb.apply(t, v);
            CHECK((hv - std::exp(-t * lam) * v).norm() <= 1e-9 * v.norm());
        }
    }
    SUBCASE("chebyshev degree sits in the certified window") {
        int deg = cheb.degree(1.0);
        CHECK(deg >= 20);
        CHECK(deg <= 40);
    }
    SUBCASE("chebyshev path matches the dense-eig oracle") {
        Eigen::VectorXd v = Eigen::VectorXd::Random(256);
        Eigen::MatrixXd E = oracles::dense_heat(op.to_dense(), 1.0);
        CHECK((cheb.apply(1.0, v) - E * v).norm() <= 1e-10 * v.norm());
        CHECK((exact.apply(1.0, v) - E * v).norm() <= 1e-11 * v.norm());
    }
    SUBCASE("semigroup property") {
        Eigen::VectorXd v = Eigen::VectorXd::Random(256);
        Eigen::VectorXd a = cheb.apply(0.6, cheb.apply(0.4, v));
        Eigen::VectorXd b = cheb.apply(1.0, v);
        CHECK((a - b).norm() <= 2e-10 * v.norm());
    }
    SUBCASE("negative t rejected") {
        Eigen::VectorXd v = Eigen::VectorXd::Ones(256);
        CHECK_THROWS_AS(cheb.apply(-0.5, v), std::invalid_argument);
    }
}

TEST_CASE("weighted heat trace") {
    auto geom = chain(200);
    auto op = build_lattice_laplacian(geom);
    std::vector<double> ones(200, 1.0);

    SUBCASE("t=0 counts the weight mass") {
        auto r = weighted_heat_trace(op, 0.0, ones);
        CHECK(r.value == doctest::Approx(200.0));
        CHECK(r.std_error == 0.0);
    }
    SUBCASE("exact mode equals the dense per-column oracle") {
        Eigen::MatrixXd E = oracles::dense_heat(op.to_dense(), 0.7);
        std::vector<double> g(200, 0.0);
        for (int i = 40; i < 120; ++i) g[i] = 1.0 + 0.01 * i;
        double oracle = 0.0;
        for (int i = 0; i < 200; ++i) oracle += g[i] * E(i, i);
        auto r = weighted_heat_trace(op, 0.7, g);
        CHECK(r.value == doctest::Approx(oracle).epsilon(1e-11));
    }
    SUBCASE("stochastic mode brackets the exact value") {
        auto exact = weighted_heat_trace(op, 1.0, ones);
        ProbeEnsemble pe;
        pe.n_probes = 256;
        pe.seed = 17;
        auto est = weighted_heat_trace(op, 1.0, ones, pe);
        CHECK(est.std_error > 0.0);
        CHECK(std::fabs(est.value - exact.value) <= 3.0 * est.std_error);
    }
    SUBCASE("stochastic estimator is unbiased across seeds") {
        auto small_geom = chain(64);
        auto small_op = build_schrodinger(small_geom, IidUniformPotential{0.0, 1.0, 5});
        auto exact = weighted_heat_trace(small_op, 1.0, std::vector<double>(64, 1.0));
        double acc = 0.0, var = 0.0;
        const int nseeds = 50;
        std::vector<double> vals(nseeds);
        for (int s = 0; s < nseeds; ++s) {
            ProbeEnsemble pe;
            pe.n_probes = 16;
            pe.seed = 1000 + s;
            vals[s] = weighted_heat_trace(small_op, 1.0,
                                          std::vector<double>(64, 1.0), pe).value;
            acc += vals[s];
        }
        acc /= nseeds;
        for (double v : vals) var += (v - acc) * (v - acc);
        var /= (nseeds - 1);
        double se_mean = std::sqrt(var / nseeds);
        CHECK(std::fabs(acc - exact.value) <= 4.0 * se_mean);
    }
    SUBCASE("too few probes rejected") {
        ProbeEnsemble pe;
        pe.n_probes = 4;
        CHECK_THROWS_AS(weighted_heat_trace(op, 1.0, ones, pe),
                        std::invalid_argument);
    }
}

TEST_CASE("commutator with multiplier") {
    auto geom3 = chain(3, Boundary::Dirichlet);
    auto op3 = build_lattice_laplacian(geom3);

    SUBCASE("constant field commutes") {
        auto c = commutator_with_multiplier(op3, {2.0, 2.0, 2.0});
        CHECK(c.nnz() == 0);
    }
    SUBCASE("3x3 direct computation") {
        std::vector<double> w = {1.0, 0.5, 1.0 / 3.0};
        auto c = commutator_with_multiplier(op3, w);
        // P M_w - M_w P on the two edges, entries P_xy (w_y - w_x) = -(w_y - w_x)
        Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(3, 3);
        for (std::int64_t r = 0; r < c.rows; ++r)
            for (std::int64_t k = c.rowptr[r]; k < c.rowptr[r + 1]; ++k)
                dense(r, c.colidx[k]) = c.values[k];
        Eigen::MatrixXd P = op3.to_dense();
        Eigen::MatrixXd W = Eigen::Vector3d(w.data()).asDiagonal();
        Eigen::MatrixXd oracle = P * W - W * P;
        CHECK((dense - oracle).norm() < 1e-15);
        CHECK(dense(0, 0) == 0.0);
        CHECK(dense(0, 1) == doctest::Approx(0.5));   // -1 * (0.5 - 1)
        CHECK(dense(1, 0) == doctest::Approx(-0.5));  // anti-symmetric
    }
    SUBCASE("diagonal operator commutes") {
        sparse::Builder<double> b(4, 4);
        for (int i = 0; i < 4; ++i) b.add(i, i, 1.0 + i);
        SparseHermitianOperator diag(b.build());
        auto c = commutator_with_multiplier(diag, {4, 3, 2, 1});
        CHECK(c.nnz() == 0);
    }
}

TEST_CASE("duhamel residual") {
    SUBCASE("2x2 analytic case") {
        Eigen::MatrixXd P = Eigen::Vector2d(1.0, 2.0).asDiagonal();
        Eigen::MatrixXd W(2, 2);
        W << 0, 1, 1, 0;
        // closed form in the eigenbasis: ([e^{-tP},W])_{12} = e^{-t} - e^{-2t}
        Eigen::MatrixXd E = oracles::dense_heat(P, 1.0);
        Eigen::MatrixXd lhs = E * W - W * E;
        CHECK(std::fabs(lhs(0, 1)) ==
              doctest::Approx(std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-12));
        CHECK(duhamel_residual(P, W, 1.0, 32) < 1e-10);
    }
    SUBCASE("identity W gives zero") {
        Eigen::MatrixXd P = Eigen::Vector2d(1.0, 2.0).asDiagonal();
        CHECK(duhamel_residual(P, Eigen::MatrixXd::Identity(2, 2), 1.0, 16) < 1e-14);
    }
    SUBCASE("commuting pair gives zero") {
        Eigen::MatrixXd P = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
        Eigen::MatrixXd W = Eigen::Vector3d(5.0, 5.0, 7.0).asDiagonal();
        CHECK(duhamel_residual(P, W, 0.8, 16) < 1e-12);
    }
    SUBCASE("random 16x16 pairs") {
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::MatrixXd G(16, 16), H(16, 16);
            for (int i = 0; i < 16; ++i)
                for (int j = 0; j < 16; ++j) {
                    G(i, j) = rng::uniform(61, trial, i * 16 + j) - 0.5;
                    H(i, j) = rng::uniform(62, trial, i * 16 + j) - 0.5;
                }
            Eigen::MatrixXd P = 0.5 * (G + G.transpose());
            Eigen::MatrixXd W = 0.5 * (H + H.transpose());
            CHECK(duhamel_residual(P, W, 1.0, 32) < 1e-8);
        }
    }
}

TEST_CASE("trace norm diagnostic") {
    auto geomA = chain(256, Boundary::Dirichlet);
    auto opA = build_lattice_laplacian(geomA);
    lattice::WeightField wA(geomA);

    SUBCASE("constant field gives zero") {
        CHECK(trace_norm_diagnostic(opA, 1.0, std::vector<double>(256, 3.0)) <
              1e-12);
    }
    SUBCASE("against an independent dense SVD oracle at N=64") {
        auto geom = chain(64, Boundary::Dirichlet);
        auto op = build_lattice_laplacian(geom);
        lattice::WeightField w(geom);
        Eigen::MatrixXd E = oracles::dense_heat(op.to_dense(), 1.0);
        Eigen::MatrixXd P = op.to_dense();
        Eigen::MatrixXd Wm = Eigen::Map<const Eigen::VectorXd>(w.values().data(), 64)
                                 .asDiagonal();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(E * (P * Wm - Wm * P));
        double oracle = svd.singularValues().sum();
        CHECK(trace_norm_diagnostic(op, 1.0, w.values()) ==
              doctest::Approx(oracle).epsilon(1e-9));
    }
    SUBCASE("stabilizes across box sizes") {
        auto geomB = chain(512, Boundary::Dirichlet);
        auto opB = build_lattice_laplacian(geomB);
        lattice::WeightField wB(geomB);
        double ta = trace_norm_diagnostic(opA, 1.0, wA.values());
        double tb = trace_norm_diagnostic(opB, 1.0, wB.values());
        CHECK(tb / ta < 1.2);
    }
    SUBCASE("decreases in t") {
        double prev = 1e300;
        for (double t : {0.5, 1.0, 2.0, 4.0}) {
            double v = trace_norm_diagnostic(opA, t, wA.values());
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("hofstadter pair construction") {
    SUBCASE("gauge error when q does not divide Lx") {
        CHECK_THROWS_AS(build_hofstadter_dirac(5, 6, 1, 6), std::invalid_argument);
    }
    SUBCASE("flux 0 pair is square and normal") {
        auto pair = build_hofstadter_dirac(6, 4, 0, 1);
        CHECK(pair.plus_dim() == 24);
        CHECK(pair.minus_dim() == 24);
        CHECK(pair.expected_index() == 0);
        Eigen::MatrixXcd D = pair.d_plus();
        CHECK((D * D.adjoint() - D.adjoint() * D).norm() < 1e-12);
    }
    SUBCASE("supersymmetry: nonzero spectra of the squares coincide") {
        auto pair = build_hofstadter_dirac(6, 6, 1, 6);
        CHECK(pair.plus_dim() == 36);
        CHECK(pair.minus_dim() == 30);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ep(pair.square_plus());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(pair.square_minus());
        std::vector<double> nzp, nzm;
        for (int i = 0; i < 36; ++i)
            if (ep.eigenvalues()[i] > 1e-10) nzp.push_back(ep.eigenvalues()[i]);
        for (int i = 0; i < 30; ++i)
            if (em.eigenvalues()[i] > 1e-10) nzm.push_back(em.eigenvalues()[i]);
        REQUIRE(nzp.size() == nzm.size());
        for (std::size_t i = 0; i < nzp.size(); ++i)
            CHECK(nzp[i] == doctest::Approx(nzm[i]).epsilon(1e-9));
    }
}
