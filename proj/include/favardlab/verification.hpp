#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "favardlab/estimators.hpp"
#include "favardlab/interval_set.hpp"
#include "favardlab/quadrature.hpp"

namespace favardlab {

// First angle at which [-a,a] + 3a*sin(theta) and [-a,a] + 3a*cos(theta)
// meet: cos(theta) - sin(theta) = 2/3. The equation divides out a, so the
// result does not depend on it. Bisection to below 1e-14.
inline double theta_star(double a) {
    if (!(a > 0.0)) throw input_error("theta_star requires a > 0");
    double lo = 0.0, hi = std::numbers::pi / 4.0;
    // g(lo) = 1/3 > 0, g(hi) = -2/3 < 0, g strictly decreasing
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = std::cos(mid) - std::sin(mid) - 2.0 / 3.0;
        if (g > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Expected-overlap coefficient used by the inductive check. Two adjacent
// copies of a degree-d figure are translates of a common set I inside
// [-a, a] with a = 1/d and |I| = L/d; the overlap integral over the full
// rotation range is at least |I|^2 / (6*sqrt(2)*a) = L^2 / (6*sqrt(2)*d).
// Dividing by the range 2*pi/d turns that into an expectation bound
// c * L^2 with c = 1/(12*sqrt(2)*pi) = sqrt(2)/(24*pi), independent of d.
// The tighter per-degree geometry is not exploited, so the bound is loose
// for every d in the same way it is for d = 4.
inline double derived_overlap_constant(int degree) {
    if (degree < 3) throw input_error("degree must be >= 3");
    return std::numbers::sqrt2 / (24.0 * std::numbers::pi);
}

struct OverlapReport {
    double a = 0.0;
    double set_measure = 0.0;
    double integral = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double quad_tol = 0.0;
    std::size_t quad_evals = 0;
    bool bounds_ok = false;     // lower <= integral <= upper within quad_tol
    bool vanishing_ok = false;  // f == 0 outside [theta* - 1e-9, pi/2 - theta* + 1e-9]
    bool midpoint_ok = false;   // f(pi/4) == |I| within 1e-12

    bool pass() const { return bounds_ok && vanishing_ok && midpoint_ok; }
};

// Integral over [0, pi/2] of |(I + 3a sin t) ∩ (I + 3a cos t)|, checked
// against the two-sided bounds |I|^2/(6*sqrt(2)*a) and |I|^2/(3a). The
// integrand has kinks wherever endpoints align, so composite midpoint with
// grid doubling does the quadrature.
inline OverlapReport overlap_integral(const IntervalSet& I, double a,
                                      std::size_t quad_points = 1024) {
    if (!(a > 0.0)) throw input_error("overlap_integral requires a > 0");
    if (quad_points < 1024) throw input_error("quad_points must be >= 1024");
    if (!I.empty() && (I.min() < -a || I.max() > a)) {
        throw input_error("interval set must lie inside [-a, a]");
    }

    OverlapReport rep;
    rep.a = a;
    rep.set_measure = I.measure();
    rep.lower_bound = rep.set_measure * rep.set_measure / (6.0 * std::numbers::sqrt2 * a);
    rep.upper_bound = rep.set_measure * rep.set_measure / (3.0 * a);
    rep.quad_tol = 1e-9 * std::max(1.0, rep.set_measure * rep.set_measure / a);

    auto f = [&](double t) {
        return intersect(translate_scale(I, 1.0, 3.0 * a * std::sin(t)),
                         translate_scale(I, 1.0, 3.0 * a * std::cos(t)))
            .measure();
    };

    const QuadResult q =
        composite_midpoint_doubling(f, 0.0, std::numbers::pi / 2.0, quad_points, rep.quad_tol);
    rep.integral = q.value;
    rep.quad_evals = q.evals;
    rep.bounds_ok = rep.integral >= rep.lower_bound - rep.quad_tol &&
                    rep.integral <= rep.upper_bound + rep.quad_tol;

    const double ts = theta_star(a);
    rep.vanishing_ok = true;
    const int grid = 2048;
    const double left_end = ts - 1e-9;
    const double right_begin = std::numbers::pi / 2.0 - ts + 1e-9;
    for (int i = 0; i <= grid; ++i) {
        if (f(left_end * i / grid) != 0.0) {
            rep.vanishing_ok = false;
            break;
        }
        const double t = right_begin + (std::numbers::pi / 2.0 - right_begin) * i / grid;
        if (f(t) != 0.0) {
            rep.vanishing_ok = false;
            break;
        }
    }
    rep.midpoint_ok = std::abs(f(std::numbers::pi / 4.0) - rep.set_measure) <= 1e-12;
    return rep;
}

struct OverlapSweepCase {
    double a = 0.0;
    OverlapReport full_interval;
    double closed_form = 0.0;
    bool closed_form_ok = false;  // quadrature within 1e-8 of the closed form
    std::size_t random_count = 0;
    std::size_t random_failures = 0;

    bool pass() const {
        return full_interval.pass() && closed_form_ok && random_failures == 0;
    }
};

struct OverlapSweep {
    std::vector<OverlapSweepCase> cases;
    bool pass = true;
};

// Deterministic random canonical subset of [-a, a]: up to max_pieces pairs
// of uniform endpoints, canonicalized. Uses the portable counter stream so
// verdicts do not depend on the standard library's distributions.
inline IntervalSet random_subset(CounterRng& rng, double a, int max_pieces = 40) {
    const int pieces = 1 + static_cast<int>(rng.next01() * max_pieces);
    std::vector<Interval> raw;
    for (int i = 0; i < pieces; ++i) {
        double lo = a * (2.0 * rng.next01() - 1.0);
        double hi = a * (2.0 * rng.next01() - 1.0);
        if (lo > hi) std::swap(lo, hi);
        raw.push_back({lo, hi});
    }
    return make_interval_set(std::move(raw));
}

// Bound checks for the overlap integral over a list of half-widths: the
// full interval [-a, a] against its closed form, plus n_random random
// canonical subsets per half-width.
inline OverlapSweep overlap_sweep(const std::vector<double>& half_widths, std::size_t n_random,
                                  std::uint64_t seed) {
    OverlapSweep sweep;
    for (double a : half_widths) {
        OverlapSweepCase cs;
        cs.a = a;
        cs.full_interval = overlap_integral(single_interval(-a, a), a);
        const double ts = theta_star(a);
        // two congruent lobes: integrate 2a - 3a(cos t - sin t) over
        // [theta*, pi/4] and double
        cs.closed_form = 2.0 * (2.0 * a * (std::numbers::pi / 4.0 - ts) -
                                3.0 * a * (std::numbers::sqrt2 - (std::sin(ts) + std::cos(ts))));
        cs.closed_form_ok = std::abs(cs.full_interval.integral - cs.closed_form) <= 1e-8;

        CounterRng rng{seed ^ (0x9E3779B9ull + static_cast<std::uint64_t>(a * 1e9)), 0};
        cs.random_count = n_random;
        for (std::size_t i = 0; i < n_random; ++i) {
            const OverlapReport rep = overlap_integral(random_subset(rng, a), a);
            if (!rep.pass()) ++cs.random_failures;
        }
        sweep.pass = sweep.pass && cs.pass();
        sweep.cases.push_back(cs);
    }
    return sweep;
}

struct InductionRow {
    int k = 0;
    double e_prev = 0.0;
    double e_k = 0.0;
    double slack = 0.0;      // e_prev - c*e_prev^2 - e_k
    double tolerance = 0.0;  // 3 * (se_k + se_prev + 2*e_prev*se_prev)
    bool pass = false;
};

struct InductionReport {
    double c = 0.0;
    std::vector<InductionRow> rows;
    bool pass = true;
};

// Checks E_k <= E_{k-1} - c*E_{k-1}^2 row by row, inside a 3-sigma band
// that carries a delta-method term for the squared mean.
inline InductionReport verify_induction(const CurveReport& curve,
                                        std::optional<double> c_override = std::nullopt) {
    if (curve.records.size() < 2) throw input_error("induction check needs at least two levels");
    for (std::size_t i = 0; i < curve.records.size(); ++i) {
        if (curve.records[i].k != static_cast<int>(i) + 1) {
            throw input_error("curve records must be contiguous levels 1..n");
        }
    }
    InductionReport rep;
    rep.c = c_override.value_or(derived_overlap_constant(curve.spec.degree));
    for (std::size_t i = 1; i < curve.records.size(); ++i) {
        const EstimateRecord& prev = curve.records[i - 1];
        const EstimateRecord& curr = curve.records[i];
        InductionRow row;
        row.k = curr.k;
        row.e_prev = prev.mean;
        row.e_k = curr.mean;
        row.slack = prev.mean - rep.c * prev.mean * prev.mean - curr.mean;
        row.tolerance = 3.0 * (curr.stderr_ + prev.stderr_ + 2.0 * prev.mean * prev.stderr_);
        row.pass = row.slack >= -row.tolerance;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

struct FitModel {
    double C = 0.0;
    double exponent = 0.0;  // p for the power model, c for the sqrt-log model
    double rss = 0.0;
};

struct FitReport {
    FitModel power;     // log E_k = log C - p log k
    FitModel inverse;   // log E_k = log C - log k
    FitModel sqrt_log;  // log E_k = log C - c sqrt(log k)
    std::vector<std::pair<int, double>> k_times_mean;
};

namespace detail {

// least squares y = A - B*x; returns (A, B, rss)
inline std::array<double, 3> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double B = sxx > 0 ? -sxy / sxx : 0.0;
    const double A = my + B * mx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (A - B * x[i]);
        rss += r * r;
    }
    return {A, B, rss};
}

}  // namespace detail

// Least-squares comparison of the decay against a free power law, a pure
// 1/k law, and exp(-c sqrt(log k)).
inline FitReport fit_decay(const CurveReport& curve) {
    if (curve.records.size() < 4) throw input_error("fit needs at least four levels");
    std::vector<double> logk, y, sqrtlogk;
    FitReport rep;
    for (const EstimateRecord& r : curve.records) {
        if (!(r.mean > 0.0)) throw input_error("fit requires positive means");
        logk.push_back(std::log(static_cast<double>(r.k)));
        sqrtlogk.push_back(std::sqrt(std::log(static_cast<double>(r.k))));
        y.push_back(std::log(r.mean));
        rep.k_times_mean.emplace_back(r.k, r.k * r.mean);
    }

    const auto pw = detail::fit_line(logk, y);
    rep.power = {std::exp(pw[0]), pw[1], pw[2]};

    // slope pinned to -1: log C = mean(y + log k)
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += y[i] + logk[i];
    const double logC = acc / y.size();
    double rss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - (logC - logk[i]);
        rss += r * r;
    }
    rep.inverse = {std::exp(logC), 1.0, rss};

    const auto sl = detail::fit_line(sqrtlogk, y);
    rep.sqrt_log = {std::exp(sl[0]), sl[1], sl[2]};
    return rep;
}

struct MattilaReport {
    std::vector<std::pair<int, double>> ratios;  // (k, k * mean_k)
    double r_min = 0.0;
    double r_max = 0.0;
    bool pass = true;
};

// Observational band for k * E_k: anchored on levels 2..5 of the data
// itself, a factor 4 below the minimum and above the maximum. Flags
// divergence or collapse of the ratio; a sanity corridor, not a bound.
inline MattilaReport mattila_ratio(const CurveReport& curve) {
    if (curve.records.size() < 5) throw input_error("ratio table needs at least five levels");
    MattilaReport rep;
    double lo = 0.0, hi = 0.0;
    for (const EstimateRecord& r : curve.records) {
        const double ratio = r.k * r.mean;
        rep.ratios.emplace_back(r.k, ratio);
        if (r.k >= 2 && r.k <= 5) {
            if (lo == 0.0 || ratio < lo) lo = ratio;
            if (ratio > hi) hi = ratio;
        }
    }
    rep.r_min = lo / 4.0;
    rep.r_max = hi * 4.0;
    for (const auto& [k, ratio] : rep.ratios) {
        if (ratio < rep.r_min || ratio > rep.r_max) rep.pass = false;
    }
    return rep;
}

struct ThetaInvarianceRow {
    double theta_a = 0.0;
    double theta_b = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct ThetaInvarianceReport {
    int k = 0;
    std::vector<double> thetas;
    std::vector<EstimateRecord> estimates;
    std::vector<ThetaInvarianceRow> rows;
    double max_abs_z = 0.0;
    bool pass = true;
};

// Same words, different projection angles: pairwise z-tests on the level-k
// means. Expectations are angle-free, single realizations are not.
inline ThetaInvarianceReport verify_theta_invariance(FractalSpec spec, int k,
                                                     const std::vector<double>& thetas,
                                                     std::uint64_t n_samples, const SeedSpec& seed,
                                                     int workers = 1,
                                                     const ProjectionCaps& caps = {}) {
    if (thetas.size() < 2) throw input_error("theta invariance needs at least two angles");
    if (k < 1) throw input_error("level k must be >= 1");
    spec.generations = k;
    ThetaInvarianceReport rep;
    rep.k = k;
    rep.thetas = thetas;
    for (double theta : thetas) {
        const CurveReport curve = estimate_curve(spec, theta, n_samples, seed, workers, caps);
        rep.estimates.push_back(curve.records.back());
    }
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        for (std::size_t j = i + 1; j < thetas.size(); ++j) {
            const EstimateRecord& a = rep.estimates[i];
            const EstimateRecord& b = rep.estimates[j];
            ThetaInvarianceRow row;
            row.theta_a = thetas[i];
            row.theta_b = thetas[j];
            const double denom = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
            const double diff = std::abs(a.mean - b.mean);
            row.z = denom > 0.0 ? diff / denom
                                : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            row.pass = row.z <= 3.0;
            rep.max_abs_z = std::max(rep.max_abs_z, row.z);
            rep.pass = rep.pass && row.pass;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

}  // namespace favardlab
