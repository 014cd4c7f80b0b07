#pragma once

#include <functional>
#include <string>
#include <vector>

namespace dostrace::growth {

// Volume-growth profile of a model geometry: V(r) = |B(x0,r)|, its surface
// S = V', and S'. Closed-form samplers or a tabulated grid (linear
// interpolation). V is clamped to V(0) for r < 0, and likewise S, S'.
class GrowthProfile {
  public:
    enum class Representation { ClosedForm, Tabulated };

    static GrowthProfile power(double d, double c = 1.0);              // V = c r^d
    static GrowthProfile stretched_exp(double alpha, double c = 1.0);  // V = c exp(r^alpha)
    static GrowthProfile exponential(double rate);                     // V = exp(rate r)
    // CSV columns r,V,S,Sprime; validates V non-decreasing and the discrete
    // consistency |V(r+h)-V(r) - int S| <= tol * V(r+h).
    static GrowthProfile from_table(const std::string& csv_path, double tol = 1e-2);

    double V(double r) const;
    double S(double r) const;
    double Sprime(double r) const;
    // Log-space accessors keep ratio computations finite when V itself
    // overflows (fast-growing profiles at the default cutoffs).
    double logV(double r) const;
    double logS(double r) const;
    Representation representation() const { return repr_; }
    const std::string& label() const { return label_; }

    // S(r1)/V(r2) and V(r1)/V(r2), stable under overflow of the parts.
    double ratio_SV(double r1, double r2) const;
    double ratio_VV(double r1, double r2) const;

  private:
    GrowthProfile() = default;
    std::function<double(double)> v_, s_, sp_, logv_, logs_;
    Representation repr_ = Representation::ClosedForm;
    std::string label_;
};

enum class TailVerdict { Summable, Divergent, Inconclusive };

const char* to_string(TailVerdict v);

struct PropertyDReport {
    double ell2_partial_sum = 0.0;      // sum_{k<=K} (S(k)/V(k))^2
    TailVerdict ell2_tail_verdict = TailVerdict::Inconclusive;
    double derivative_ratio_limit = 0.0;  // S'(Rmax)/S(Rmax)
    double derivative_trend_slope = 0.0;  // change across the R checkpoints
    bool passes = false;
    int K = 0;
    double Rmax = 0.0;
};

// entry k-1 = S(k)/V(k) for k = 1..K. Throws geometry error on V(k) = 0.
std::vector<double> surface_ratio_sequence(const GrowthProfile& profile, int K);

// Both Property (D) conditions on finite data. The ell_2 verdict combines a
// fitted decay exponent on k in [K/2,K] with a dyadic Cauchy test; the
// derivative condition requires S'(R)/S(R) non-increasing over
// {Rmax/4, Rmax/2, Rmax} with final value < 0.05.
PropertyDReport check_property_d(const GrowthProfile& profile, int K, double Rmax);

// min over R in [Rmax/2, Rmax] (step 0.5) of V(R-r)/V(R+r).
double check_grimaldi_ratio(const GrowthProfile& profile, double r, double Rmax);

struct ShiftedSurfaceReport {
    double partial_sum = 0.0;
    TailVerdict verdict = TailVerdict::Inconclusive;
};

// {sup_{s in [0,h]} S(k+s) / V(k)}_k in ell_2? Sup on a grid of step
// min(h/8, 0.125).
ShiftedSurfaceReport shifted_surface_condition(const GrowthProfile& profile,
                                               double h, int K);

struct Condition1Report {
    double partial_sum = 0.0;
    TailVerdict verdict = TailVerdict::Inconclusive;
};

// sum_{k=0..K} sup_{s in [-1,2]} S((k+s) r0)^2 / (1+V((k-1) r0))^2, sup on an
// s-grid of step 0.125, V and S clamped below r = 0.
Condition1Report condition1_partial_sum(const GrowthProfile& profile, double r0,
                                        int K);

// w at a given distance: 1/(1+V(distance)).
double weight_at(const GrowthProfile& profile, double distance);

// Shared finite-data classifier for sum x_k^2: fitted log-log decay exponent
// on [K/2,K] against the dyadic Cauchy increment test; Inconclusive when the
// two signals disagree.
TailVerdict classify_square_summability(const std::vector<double>& x);

}  // namespace dostrace::growth
