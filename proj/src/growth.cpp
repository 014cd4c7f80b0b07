#include "dostrace/growth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace dostrace::growth {

GrowthProfile GrowthProfile::power(double d, double c) {
    if (!(d > 0.0) || !(c > 0.0))
        throw std::invalid_argument("power profile: d and c must be positive");
    GrowthProfile p;
    p.v_ = [d, c](double r) { return c * std::pow(r, d); };
    p.s_ = [d, c](double r) { return c * d * std::pow(r, d - 1.0); };
    p.sp_ = [d, c](double r) {
        return d > 1.0 ? c * d * (d - 1.0) * std::pow(r, d - 2.0) : 0.0;
    };
    p.logv_ = [d, c](double r) { return std::log(c) + d * std::log(r); };
    p.logs_ = [d, c](double r) {
        return std::log(c * d) + (d - 1.0) * std::log(r);
    };
    p.label_ = "power(d=" + std::to_string(d) + ")";
    return p;
}

GrowthProfile GrowthProfile::stretched_exp(double alpha, double c) {
    if (!(alpha > 0.0) || alpha >= 1.0 || !(c > 0.0))
        throw std::invalid_argument("stretched_exp profile: need 0 < alpha < 1, c > 0");
    GrowthProfile p;
    p.v_ = [alpha, c](double r) { return c * std::exp(std::pow(r, alpha)); };
    p.s_ = [alpha, c](double r) {
        return c * alpha * std::pow(r, alpha - 1.0) * std::exp(std::pow(r, alpha));
    };
    p.sp_ = [alpha, c](double r) {
        double ra = std::pow(r, alpha);
        return c * alpha * std::exp(ra) * std::pow(r, alpha - 2.0) *
               ((alpha - 1.0) + alpha * ra);
    };
    p.logv_ = [alpha, c](double r) { return std::log(c) + std::pow(r, alpha); };
    p.logs_ = [alpha, c](double r) {
        return std::log(c * alpha) + (alpha - 1.0) * std::log(r) + std::pow(r, alpha);
    };
    p.label_ = "stretched-exp(alpha=" + std::to_string(alpha) + ")";
    return p;
}

GrowthProfile GrowthProfile::exponential(double rate) {
    if (!(rate > 0.0))
        throw std::invalid_argument("exponential profile: rate must be positive");
    GrowthProfile p;
    p.v_ = [rate](double r) { return std::exp(rate * r); };
    p.s_ = [rate](double r) { return rate * std::exp(rate * r); };
    p.sp_ = [rate](double r) { return rate * rate * std::exp(rate * r); };
    p.logv_ = [rate](double r) { return rate * r; };
    p.logs_ = [rate](double r) { return std::log(rate) + rate * r; };
    p.label_ = "exp(rate=" + std::to_string(rate) + ")";
    return p;
}

namespace {

struct Table {
    std::vector<double> r, v, s, sp;
    double interp(const std::vector<double>& col, double x) const {
        if (x <= r.front()) return col.front();
        if (x >= r.back()) return col.back();
        auto it = std::upper_bound(r.begin(), r.end(), x);
        std::size_t i = static_cast<std::size_t>(it - r.begin());
        double f = (x - r[i - 1]) / (r[i] - r[i - 1]);
        return col[i - 1] + f * (col[i] - col[i - 1]);
    }
};

}  // namespace

GrowthProfile GrowthProfile::from_table(const std::string& csv_path, double tol) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open profile table: " + csv_path);
    auto tab = std::make_shared<Table>();
    std::string line;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (!header_skipped) {
                header_skipped = true;
                continue;
            }
            throw std::runtime_error("profile table: bad row '" + line + "'");
        }
        if (row.size() != 4)
            throw std::runtime_error("profile table: expected columns r,V,S,Sprime");
        tab->r.push_back(row[0]);
        tab->v.push_back(row[1]);
        tab->s.push_back(row[2]);
        tab->sp.push_back(row[3]);
    }
    if (tab->r.size() < 2)
        throw std::runtime_error("profile table: need at least two rows");
    const double vmax = tab->v.back();
    for (std::size_t i = 1; i < tab->r.size(); ++i) {
        if (tab->r[i] <= tab->r[i - 1])
            throw std::runtime_error("profile table: r column must increase");
        if (tab->v[i] < tab->v[i - 1])
            throw std::runtime_error("profile table: V must be non-decreasing");
        // discrete consistency: V(r+h)-V(r) against the trapezoid of S; the
        // floor keeps the trapezoid's own O(h^3) error from tripping it where
        // V is still tiny.
        double dv = tab->v[i] - tab->v[i - 1];
        double ints = 0.5 * (tab->s[i] + tab->s[i - 1]) * (tab->r[i] - tab->r[i - 1]);
        double scale = std::max({tab->v[i], 1e-6 * vmax, 1e-300});
        if (std::fabs(dv - ints) > tol * scale)
            throw std::runtime_error("profile table: V and S are inconsistent near r=" +
                                     std::to_string(tab->r[i]));
    }
    GrowthProfile p;
    p.repr_ = Representation::Tabulated;
    p.v_ = [tab](double r) { return tab->interp(tab->v, r); };
    p.s_ = [tab](double r) { return tab->interp(tab->s, r); };
    p.sp_ = [tab](double r) { return tab->interp(tab->sp, r); };
    p.label_ = "table(" + csv_path + ")";
    return p;
}

double GrowthProfile::V(double r) const { return v_(std::max(r, 0.0)); }
double GrowthProfile::S(double r) const { return s_(std::max(r, 0.0)); }
double GrowthProfile::Sprime(double r) const { return sp_(std::max(r, 0.0)); }

double GrowthProfile::logV(double r) const {
    r = std::max(r, 0.0);
    if (logv_) return logv_(r);
    return std::log(v_(r));
}

double GrowthProfile::logS(double r) const {
    r = std::max(r, 0.0);
    if (logs_) return logs_(r);
    return std::log(s_(r));
}

double GrowthProfile::ratio_SV(double r1, double r2) const {
    double s = S(r1), v = V(r2);
    if (std::isfinite(s) && std::isfinite(v) && v > 0.0) return s / v;
    return std::exp(logS(r1) - logV(r2));
}

double GrowthProfile::ratio_VV(double r1, double r2) const {
    double a = V(r1), b = V(r2);
    if (std::isfinite(a) && std::isfinite(b) && b > 0.0) return a / b;
    return std::exp(logV(r1) - logV(r2));
}

namespace {

// S'(R)/S(R); falls back to differentiating log S when S itself overflows.
double log_derivative_of_S(const GrowthProfile& profile, double R) {
    double s = profile.S(R);
    double sp = profile.Sprime(R);
    if (std::isfinite(s) && s != 0.0 && std::isfinite(sp)) return sp / s;
    double h = std::max(1e-4 * R, 1e-4);
    return (profile.logS(R + h) - profile.logS(R - h)) / (2.0 * h);
}

// log(1 + V(r)), stable when V overflows.
double log1p_V(const GrowthProfile& profile, double r) {
    double v = profile.V(r);
    return std::isfinite(v) ? std::log1p(v) : profile.logV(r);
}

}  // namespace

const char* to_string(TailVerdict v) {
    switch (v) {
        case TailVerdict::Summable: return "summable";
        case TailVerdict::Divergent: return "divergent";
        default: return "inconclusive";
    }
}

std::vector<double> surface_ratio_sequence(const GrowthProfile& profile, int K) {
    if (K < 1) throw std::invalid_argument("surface_ratio_sequence: K >= 1");
    std::vector<double> out;
    out.reserve(K);
    for (int k = 1; k <= K; ++k) {
        double v = profile.V(k);
        if (v == 0.0)
            throw std::runtime_error("geometry error: V(" + std::to_string(k) + ") = 0");
        out.push_back(profile.ratio_SV(k, k));
    }
    return out;
}

TailVerdict classify_square_summability(const std::vector<double>& x) {
    const std::size_t K = x.size();
    if (K < 16) return TailVerdict::Inconclusive;

    // Fitted decay exponent of x_k on k in [K/2, K] (log-log least squares).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    bool any_zero = false;
    for (std::size_t k = K / 2; k < K; ++k) {
        if (x[k] <= 0.0) {
            any_zero = true;
            continue;
        }
        double lx = std::log(static_cast<double>(k + 1));
        double ly = std::log(x[k]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    bool fit_summable = false, fit_divergent = false;
    if (any_zero && n < K / 4) {
        fit_summable = true;  // tail is (mostly) exactly zero
    } else if (n >= 8) {
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        fit_summable = slope < -0.55;
        fit_divergent = slope > -0.45;
    }

    // Dyadic Cauchy test on the partial sums of squares.
    double total = 0.0;
    for (double v : x) total += v * v;
    double last_block = 0.0;
    for (std::size_t k = K / 2; k < K; ++k) last_block += x[k] * x[k];
    bool cauchy = total > 0.0 && last_block < 1e-3 * total;

    if (fit_summable) return TailVerdict::Summable;
    if (fit_divergent) return cauchy ? TailVerdict::Inconclusive : TailVerdict::Divergent;
    return cauchy ? TailVerdict::Summable : TailVerdict::Inconclusive;
}

PropertyDReport check_property_d(const GrowthProfile& profile, int K, double Rmax) {
    if (K < 16) throw std::invalid_argument("check_property_d: K >= 16");
    if (Rmax < K) throw std::invalid_argument("check_property_d: Rmax >= K");
    for (int k = 1; k <= K; ++k)
        if (profile.V(k) < profile.V(k - 1) - 1e-12 * std::fabs(profile.V(k)))
            throw std::runtime_error("geometry error: V not monotone");

    PropertyDReport rep;
    rep.K = K;
    rep.Rmax = Rmax;
    auto ratios = surface_ratio_sequence(profile, K);
    for (double v : ratios) rep.ell2_partial_sum += v * v;
    rep.ell2_tail_verdict = classify_square_summability(ratios);

    const double checkpoints[3] = {Rmax / 4.0, Rmax / 2.0, Rmax};
    double dr[3];
    for (int i = 0; i < 3; ++i) dr[i] = log_derivative_of_S(profile, checkpoints[i]);
    rep.derivative_ratio_limit = dr[2];
    rep.derivative_trend_slope = dr[2] - dr[0];
    const double scale = std::max({std::fabs(dr[0]), std::fabs(dr[1]), std::fabs(dr[2]), 1.0});
    bool decreasing = dr[1] <= dr[0] + 1e-12 * scale && dr[2] <= dr[1] + 1e-12 * scale;
    bool derivative_ok = decreasing && dr[2] < 0.05;

    rep.passes = rep.ell2_tail_verdict == TailVerdict::Summable && derivative_ok;
    return rep;
}

double check_grimaldi_ratio(const GrowthProfile& profile, double r, double Rmax) {
    if (!(r >= 0.0)) throw std::invalid_argument("grimaldi: r >= 0");
    if (r > 0.0 && !(Rmax > 2.0 * r))
        throw std::invalid_argument("grimaldi: Rmax > 2r required");
    double best = std::numeric_limits<double>::infinity();
    for (double R = Rmax / 2.0; R <= Rmax + 1e-9; R += 0.5) {
        if (profile.V(R + r) == 0.0)
            throw std::runtime_error("geometry error: V(R+r) = 0");
        best = std::min(best, profile.ratio_VV(R - r, R + r));
    }
    return best;
}

ShiftedSurfaceReport shifted_surface_condition(const GrowthProfile& profile,
                                               double h, int K) {
    if (!(h > 0.0)) throw std::invalid_argument("shifted_surface_condition: h > 0");
    if (K < 16) throw std::invalid_argument("shifted_surface_condition: K >= 16");
    const double step = std::min(h / 8.0, 0.125);
    std::vector<double> x;
    x.reserve(K);
    for (int k = 1; k <= K; ++k) {
        if (profile.V(k) == 0.0)
            throw std::runtime_error("geometry error: V(k) = 0");
        double sup = 0.0;
        for (double s = 0.0; s <= h + 1e-12; s += step)
            sup = std::max(sup, profile.ratio_SV(k + std::min(s, h), k));
        x.push_back(sup);
    }
    ShiftedSurfaceReport rep;
    for (double v : x) rep.partial_sum += v * v;
    rep.verdict = classify_square_summability(x);
    return rep;
}

Condition1Report condition1_partial_sum(const GrowthProfile& profile, double r0,
                                        int K) {
    if (!(r0 > 0.0) || r0 > 1.0)
        throw std::invalid_argument("condition1_partial_sum: 0 < r0 <= 1");
    const double step = 0.125;
    std::vector<double> sqrt_terms;
    sqrt_terms.reserve(K + 1);
    Condition1Report rep;
    for (int k = 0; k <= K; ++k) {
        double sup_log = -std::numeric_limits<double>::infinity();
        for (double s = -1.0; s <= 2.0 + 1e-12; s += step)
            sup_log = std::max(sup_log, profile.logS((k + std::min(s, 2.0)) * r0));
        double sqrt_term = std::exp(sup_log - log1p_V(profile, (k - 1.0) * r0));
        rep.partial_sum += sqrt_term * sqrt_term;
        sqrt_terms.push_back(sqrt_term);
    }
    rep.verdict = classify_square_summability(sqrt_terms);
    return rep;
}

double weight_at(const GrowthProfile& profile, double distance) {
    if (!(distance >= 0.0)) throw std::invalid_argument("weight_at: distance >= 0");
    return 1.0 / (1.0 + profile.V(distance));
}

}  // namespace dostrace::growth
