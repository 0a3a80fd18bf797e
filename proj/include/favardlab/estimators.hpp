#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "favardlab/projection.hpp"
#include "favardlab/quadrature.hpp"
#include "favardlab/version.hpp"

namespace favardlab {

struct EstimateRecord {
    int k = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    double theta = 0.0;
};

struct CurveReport {
    FractalSpec spec;
    SeedSpec seed;
    double theta = 0.0;
    std::vector<EstimateRecord> records;  // sorted by k = 1..n
    double wall_ms = 0.0;                 // not serialized
};

namespace detail {

// Runs fn(i) for i in [0, count) on `workers` threads over contiguous
// blocks. Results land in caller-owned slots indexed by i, so the outcome
// is independent of the thread layout. On failure the error for the
// smallest sample index wins.
template <typename Fn>
void parallel_samples(std::uint64_t count, int workers, Fn&& fn) {
    if (workers < 1) throw input_error("workers must be >= 1");
    const std::uint64_t nw = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), count);
    if (nw <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nw);
    std::vector<std::uint64_t> error_index(nw, ~0ull);
    const std::uint64_t block = (count + nw - 1) / nw;
    for (std::uint64_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            const std::uint64_t lo = w * block;
            const std::uint64_t hi = std::min(count, lo + block);
            for (std::uint64_t i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    error_index[w] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    std::size_t first = nw;
    for (std::size_t w = 0; w < nw; ++w) {
        if (errors[w] && (first == nw || error_index[w] < error_index[first])) first = w;
    }
    if (first < nw) std::rethrow_exception(errors[first]);
}

inline EstimateRecord reduce_record(const std::vector<double>& values, std::uint64_t stride,
                                    std::uint64_t offset, std::uint64_t samples, int k,
                                    double theta) {
    NeumaierSum sum;
    for (std::uint64_t i = 0; i < samples; ++i) sum.add(values[i * stride + offset]);
    const double mean = sum.value() / static_cast<double>(samples);
    NeumaierSum sq;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double d = values[i * stride + offset] - mean;
        sq.add(d * d);
    }
    const double var = sq.value() / static_cast<double>(samples - 1);
    return {k, mean, std::sqrt(var / static_cast<double>(samples)), samples, theta};
}

}  // namespace detail

// Monte Carlo means of the unit-scale projection lengths, one record per
// level. A single recursion pass per sampled word covers every level.
inline CurveReport estimate_curve(const FractalSpec& spec, double theta, std::uint64_t n_samples,
                                  const SeedSpec& seed, int workers = 1,
                                  const ProjectionCaps& caps = {}) {
    spec.validate();
    if (spec.mode != Mode::SharedRotation) {
        throw unsupported_mode_error("estimate_curve requires shared-rotation mode");
    }
    if (n_samples < 2) throw input_error("need at least 2 samples for a standard error");

    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t n = static_cast<std::uint64_t>(spec.generations);
    std::vector<double> values(n_samples * n);
    detail::parallel_samples(n_samples, workers, [&](std::uint64_t i) {
        const RotationWord word = sample_word(spec, seed, i);
        const ProjectionTrace trace = projection_levels_recursive(spec, word, theta, caps);
        std::copy(trace.level_measures.begin(), trace.level_measures.end(),
                  values.begin() + static_cast<std::ptrdiff_t>(i * n));
    });

    CurveReport report;
    report.spec = spec;
    report.seed = seed;
    report.theta = theta;
    report.records.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        report.records.push_back(
            detail::reduce_record(values, n, k, n_samples, static_cast<int>(k + 1), theta));
    }
    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                         .count();
    return report;
}

// Projection length of the one-step figure as a function of its rotation.
inline double e1_integrand(const FractalSpec& spec, double theta, double omega) {
    const int d = spec.degree;
    const double rho = spec.center_distance();
    std::vector<double> offsets(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        offsets[j] = rho * std::cos(2.0 * std::numbers::pi * j / d - omega - theta);
    }
    std::sort(offsets.begin(), offsets.end());
    const double r = spec.contraction();
    double total = 0.0;
    double cur_lo = offsets[0] - r, cur_hi = offsets[0] + r;
    for (int j = 1; j < d; ++j) {
        const double lo = offsets[j] - r, hi = offsets[j] + r;
        if (lo <= cur_hi) {
            if (hi > cur_hi) cur_hi = hi;
        } else {
            total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
        }
    }
    return total + (cur_hi - cur_lo);
}

// First-level expected projection length by quadrature over the rotation:
// (d / 2*pi) * integral over one angle period.
inline double exact_E1(const FractalSpec& spec, double theta, std::size_t quad_points = 64) {
    spec.validate();
    if (quad_points < 64) throw input_error("quad_points must be >= 64");
    const QuadResult q = composite_simpson_doubling(
        [&](double omega) { return e1_integrand(spec, theta, omega); }, 0.0, spec.angle_range(),
        quad_points, 1e-10);
    return q.value * spec.degree / (2.0 * std::numbers::pi);
}

inline constexpr double kFavardQuadTol = 1e-8;

// (1/pi) * integral over [0, pi] of the projection length, by adaptive
// composite Simpson seeded with n_theta uniform panels. Engine follows the
// mode: per-node words go through the enumerated engine.
inline double favard_length(const FractalSpec& spec, const RotationWord& word, int n_theta,
                            const ProjectionCaps& caps = {}) {
    spec.validate();
    if (n_theta < 8 || n_theta % 2 != 0) throw input_error("n_theta must be even and >= 8");
    const bool enumerated = spec.mode == Mode::PerNode;
    auto proj_length = [&](double theta) {
        if (enumerated) return projection_set_enumerated(spec, word, theta, caps).measure();
        const int n = spec.generations;
        if (n == 0) return 2.0;
        return projection_levels_recursive(spec, word, theta, caps).level_measures.back();
    };
    const double integral =
        adaptive_simpson(proj_length, 0.0, std::numbers::pi, kFavardQuadTol, n_theta);
    return integral / std::numbers::pi;
}

// Monte Carlo mean of favard_length over sampled words. theta is not
// meaningful here and is recorded as -1.
inline EstimateRecord estimate_expected_favard(const FractalSpec& spec, std::uint64_t n_samples,
                                               int n_theta, const SeedSpec& seed, int workers = 1,
                                               const ProjectionCaps& caps = {}) {
    spec.validate();
    if (n_samples < 2) throw input_error("need at least 2 samples for a standard error");
    std::vector<double> values(n_samples);
    detail::parallel_samples(n_samples, workers, [&](std::uint64_t i) {
        values[i] = favard_length(spec, sample_word(spec, seed, i), n_theta, caps);
    });
    return detail::reduce_record(values, 1, 0, n_samples, spec.generations, -1.0);
}

// ---- CSV ----------------------------------------------------------------

inline std::string format_g17(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return std::string(buf.data());
}

inline constexpr std::string_view kCurveCsvHeader = "k,mean,stderr,samples,theta";

inline void write_curve_csv(std::ostream& os, const CurveReport& report,
                            std::string_view config_json = "{}",
                            std::string_view engine = "recursive") {
    os << "# favardlab " << kVersion << "\n";
    os << "# config " << config_json << "\n";
    os << "# engine " << engine << "\n";
    os << "# seed " << report.seed.master_seed << "\n";
    os << kCurveCsvHeader << "\n";
    for (const EstimateRecord& r : report.records) {
        os << r.k << ',' << format_g17(r.mean) << ',' << format_g17(r.stderr_) << ',' << r.samples
           << ',' << format_g17(r.theta) << "\n";
    }
}

// Reads the records back; header comments are ignored apart from the seed.
inline CurveReport read_curve_csv(std::istream& is) {
    CurveReport report;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "seed") ls >> report.seed.master_seed;
            continue;
        }
        if (!header_seen) {
            if (line != kCurveCsvHeader) {
                throw input_error("curve CSV must start with header '" +
                                  std::string(kCurveCsvHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        EstimateRecord r;
        char c1, c2, c3, c4;
        std::istringstream ls(line);
        ls >> r.k >> c1 >> r.mean >> c2 >> r.stderr_ >> c3 >> r.samples >> c4 >> r.theta;
        if (!ls || c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',') {
            throw input_error("malformed curve CSV row: " + line);
        }
        report.records.push_back(r);
    }
    if (!header_seen || report.records.empty()) {
        throw input_error("curve CSV holds no data rows");
    }
    return report;
}

}  // namespace favardlab
