#pragma once

#include <vector>

#include "dostrace/operators.hpp"
#include "dostrace/seq.hpp"

namespace dostrace::roe {

struct SupertraceResult {
    std::vector<double> ts;
    std::vector<double> values;  // per-volume supertrace per t
    double max_relative_deviation = 0.0;
    std::string mode;
    // per-t approximants in ball mode: (radius, value)
    std::vector<std::vector<std::pair<double, double>>> approximants;
};

struct BallAverageMode {
    // Empty: defaults to the saturating family {second-largest shell, full
    // torus, full torus + 1} (on a finite torus the averaging balls saturate,
    // which is the per-volume normalization emulating the open-manifold
    // average).
    std::vector<double> radii;
};
struct DixmierMode {
    seq::ExtendedLimitSurrogate surrogate = seq::ExtendedLimitSurrogate::log_extrapolation();
};

// Tr(e^{-t D_-D_+} M_g) - Tr(e^{-t D_+D_-} M_g) per unit volume, with the
// chosen DOS estimator applied to each square separately.
SupertraceResult supertrace_weighted(const operators::GradedDiracPair& pair,
                                     const std::vector<double>& ts,
                                     const BallAverageMode& mode);
SupertraceResult supertrace_weighted(const operators::GradedDiracPair& pair,
                                     const std::vector<double>& ts,
                                     const DixmierMode& mode);

// Tr(eta e^{-t D^2}) without weighting; equals the integer index exactly on
// the torus (supersymmetric cancellation).
double raw_supertrace(const operators::GradedDiracPair& pair, double t);

struct ZeroModeReport {
    int index = 0;
    int dim_ker_plus = 0;
    int dim_ker_minus = 0;
    bool ambiguous = false;  // some singular value within 10x of the threshold
    double threshold = 0.0;
};

// dim ker D_+ - dim ker D_- via singular values below 1e-8 * sigma_max.
ZeroModeReport zero_mode_index(const operators::GradedDiracPair& pair);

// Max relative deviation of the supertrace over t_list (>= 3 entries).
double t_independence_scan(const operators::GradedDiracPair& pair,
                           const std::vector<double>& t_list,
                           const BallAverageMode& mode);

}  // namespace dostrace::roe
