#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dostrace::seq {

// Finite non-increasing sequence of non-negative reals, standing for the
// singular values mu(k) of an operator or the rearrangement of a sequence.
class SingularSequence {
  public:
    SingularSequence() = default;
    // Validates monotonicity and positivity; throws std::invalid_argument.
    explicit SingularSequence(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    double operator[](std::size_t k) const { return values_[k]; }

  private:
    std::vector<double> values_;
};

// Sorts |values| non-increasing. Empty input gives an empty sequence.
SingularSequence decreasing_rearrangement(const std::vector<double>& values);

struct QuasiNormParams {
    double p = 1.0;  // may be +inf
    double q = 1.0;  // may be +inf
};

// The Lorentz ell_{p,q} quasinorm of a non-increasing sequence:
//   finite p,q : (sum (k+1)^{q/p-1} mu(k)^q)^{1/q}
//   q = inf    : sup (k+1)^{1/p} mu(k)
//   p = inf    : (sum (k+1)^{-1} mu(k)^q)^{1/q}
double lorentz_quasinorm(const SingularSequence& seq, QuasiNormParams params);

// Order for Dixmier sums: descending |lambda|, ties by descending signed
// value, then input position.
std::vector<double> eigenvalue_order(std::vector<double> values);

// out[N] = (sum_{k<=N} seq[k]) / log(2+N); natural log.
std::vector<double> log_cesaro_means(const std::vector<double>& seq);

// Stand-ins for the (non-constructive) extended limit applied to the
// log-Cesaro means. Each kind is a documented policy, not a canonical value.
struct ExtendedLimitSurrogate {
    enum class Kind { LastValue, TailMean, DyadicAgreement, LogExtrapolation };
    Kind kind = Kind::LogExtrapolation;
    double fraction = 0.2;    // TailMean: average over the last fraction
    double tolerance = 1e-2;  // DyadicAgreement + the converged flag
    int order = 1;            // LogExtrapolation: 1 or 2

    static ExtendedLimitSurrogate last_value();
    static ExtendedLimitSurrogate tail_mean(double fraction = 0.2);
    static ExtendedLimitSurrogate dyadic_agreement(double tolerance = 1e-2);
    static ExtendedLimitSurrogate log_extrapolation(int order = 1);
};

struct DixmierEstimate {
    double value = 0.0;
    std::vector<double> means;  // same length as the input sequence
    bool converged = false;
    double spread = 0.0;  // max-min of means over the diagnostic window
};

// seq ordered as by eigenvalue_order. Throws on length < 16
// ("insufficient data"). converged: means over the diagnostic window (last
// 20% of indices plus any dyadic indices therein) agree within
// tolerance*max(1,|value|).
DixmierEstimate dixmier_estimate(const std::vector<double>& seq,
                                 const ExtendedLimitSurrogate& surrogate);

// k-way merge of non-increasing sequences; equals the rearrangement of the
// concatenation.
SingularSequence direct_sum_singular_values(
    const std::vector<SingularSequence>& parts);

// Riemann zeta on s > 1 by Euler-Maclaurin, abs error below 1e-10 for
// s in (1, 32].
double riemann_zeta(double s);

struct ZetaReport {
    double lhs = 0.0;   // sum mu(k)/(k+1)  ( = ||X||_{inf,1} )
    double rhs = 0.0;   // ||X||_{q,inf} * zeta(1+1/q)
    bool holds = false;
};

// Checks ||X||_{inf,1} <= ||X||_{q,inf} zeta(1+1/q) on the truncation.
// Throws on q <= 0.
ZetaReport zeta_inequality_check(const SingularSequence& seq, double q);

}  // namespace dostrace::seq
