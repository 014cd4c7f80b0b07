#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dostrace/seq.hpp"

namespace dostrace::verify {

// ---- matrix model for the abstract two-sided trace identity ----

struct FreeLaplacianSpec {};  // d=1 periodic lattice Laplacian of size n
struct RandomSymSpec {
    std::uint64_t seed = 1;
};
using PSpec = std::variant<FreeLaplacianSpec, RandomSymSpec>;

struct MainTheoremReport {
    double dixmier_value = 0.0;
    double epsilon_value = 0.0;
    double gap = 0.0;
    bool dixmier_converged = false;
    bool epsilon_converged = false;
};

// Both sides with W = diag(1/(k+1)): log-Cesaro eigenvalue side of
// W^{1/2} e^{-tP} W^{1/2} against the eps = 1/m projection family.
MainTheoremReport matrix_model_main_theorem(std::int64_t n, const PSpec& p_spec,
                                            double t);

// ---- s vs eps bridge on diagonal models ----

struct IdentityDiag {};
struct ConvergingDiag {
    double limit = 1.0;
    double decay = 1.0;  // a_k = limit + decay/(k+1)
};
struct HarmonicDiag {};  // b_k = 1/(k+1)
struct FiniteRankDiag {
    std::int64_t rank = 4;
    double value = 1.0;
};
struct CustomDiag {
    std::vector<double> values;
};
using ASpec = std::variant<IdentityDiag, ConvergingDiag, CustomDiag>;
using BSpec = std::variant<HarmonicDiag, FiniteRankDiag, CustomDiag>;

std::vector<double> diag_values(const ASpec& spec, std::int64_t n);
std::vector<double> diag_values(const BSpec& spec, std::int64_t n);

struct BridgeReport {
    double s_value = 0.0;
    double eps_value = 0.0;
    double gap = 0.0;
    double scale = 1.0;              // ||B|| used for internal normalization
    double tail_correction_max = 0.0;
    std::vector<std::pair<double, double>> s_family;    // (s, corrected value)
    std::vector<std::pair<double, double>> eps_family;  // (eps, value)
};

// lim_{s->1} (s-1) Tr(A B^s) vs lim_{eps->0} eps Tr(A chi_{[eps,inf)}(B)) on
// diagonal operators, computed exactly at finite n. The s family carries the
// generator's integral tail correction (reported), Richardson-extrapolated in
// s-1; the eps family uses the last-3 mean.
BridgeReport s_vs_epsilon_bridge(std::int64_t n, const ASpec& a_spec,
                                 const BSpec& b_spec,
                                 std::vector<double> s_grid,
                                 std::vector<double> eps_grid);

// ---- Araki-Lieb-Thirring fuzz ----

struct AltReport {
    int violations = 0;
    double worst_ratio = 0.0;  // max lhs/rhs over trials
    int trials = 0;
};

// ||AB||_{r,inf}^r <= e ||A^r B^r||_{1,inf} over seeded Wishart-type PSD
// draws of size <= n_max. Counts violations beyond 1+1e-10.
AltReport alt_inequality_fuzz(int n_max, int trials, double r, std::uint64_t seed);

}  // namespace dostrace::verify
