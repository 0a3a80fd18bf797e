#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "favardlab/geometry.hpp"
#include "favardlab/interval_set.hpp"

namespace favardlab {

struct ProjectionCaps {
    std::size_t max_intervals = 30'000'000;
    std::uint64_t max_disks = kDefaultMaxDisks;
};

// [<c, e_theta> - r, <c, e_theta> + r]
inline Interval project_disk(const Disk& disk, double theta) {
    const double mid = disk.center.x * std::cos(theta) + disk.center.y * std::sin(theta);
    return {mid - disk.radius, mid + disk.radius};
}

struct ProjectionTrace {
    // level_measures[k-1] = |projection| of the unit-scale level-k figure
    // built from the innermost k angles.
    std::vector<double> level_measures;
    IntervalSet set;
};

namespace detail {

// Union of degree translated copies of src/degree. src canonical; output
// canonical. Streams a d-way merge over the copies, so nothing bigger than
// the result is ever materialized.
inline std::vector<Interval> scaled_star_union(const std::vector<Interval>& src,
                                               const std::vector<double>& offsets,
                                               double inv_degree, std::size_t max_intervals) {
    const std::size_t d = offsets.size();
    const std::size_t m = src.size();
    std::vector<Interval> out;
    out.reserve(std::min(max_intervals, d * m) + 1);

    std::vector<std::size_t> cursor(d, 0);
    std::size_t remaining = d * m;
    bool open = false;
    Interval cur{0.0, 0.0};
    while (remaining > 0) {
        std::size_t best = d;
        double best_lo = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (cursor[j] == m) continue;
            const double lo = src[cursor[j]].lo * inv_degree + offsets[j];
            if (best == d || lo < best_lo) {
                best = j;
                best_lo = lo;
            }
        }
        const Interval& base = src[cursor[best]];
        const double hi = base.hi * inv_degree + offsets[best];
        ++cursor[best];
        --remaining;

        if (open && best_lo <= cur.hi) {
            if (hi > cur.hi) cur.hi = hi;
        } else {
            if (open) {
                if (out.size() >= max_intervals) {
                    throw resource_error("projection exceeds max_intervals cap (" +
                                         std::to_string(max_intervals) + ")");
                }
                out.push_back(cur);
            }
            cur = {best_lo, hi};
            open = true;
        }
    }
    if (open) {
        if (out.size() >= max_intervals) {
            throw resource_error("projection exceeds max_intervals cap (" +
                                 std::to_string(max_intervals) + ")");
        }
        out.push_back(cur);
    }
    return out;
}

}  // namespace detail

// Translate-and-scale recursion for the projection of the generation-n
// figure onto the line at angle theta. Starts from [-1, 1] and consumes the
// word innermost angle first, so one pass yields the measures of all the
// unit-scale suffix figures along the way. Shared-rotation and deterministic
// words only: the step relies on every sibling being the same set.
inline ProjectionTrace projection_levels_recursive(const FractalSpec& spec,
                                                   const RotationWord& word, double theta,
                                                   const ProjectionCaps& caps = {}) {
    word.validate_against(spec);
    if (spec.mode == Mode::PerNode || word.per_node_layout()) {
        throw unsupported_mode_error(
            "per-node rotations break the translate recursion; use the enumerated engine");
    }
    const int n = spec.generations;
    const int d = spec.degree;
    const double inv_d = spec.contraction();
    const double rho = spec.center_distance();

    ProjectionTrace trace;
    trace.level_measures.reserve(static_cast<std::size_t>(n));
    std::vector<Interval> current{Interval{-1.0, 1.0}};
    std::vector<double> offsets(static_cast<std::size_t>(d));
    for (int k = 1; k <= n; ++k) {
        const double omega = word.angle(n - k);
        for (int j = 0; j < d; ++j) {
            offsets[j] = rho * std::cos(2.0 * std::numbers::pi * j / d - omega - theta);
        }
        current = detail::scaled_star_union(current, offsets, inv_d, caps.max_intervals);
        NeumaierSum sum;
        for (const Interval& iv : current) sum.add(iv.length());
        trace.level_measures.push_back(sum.value());
    }
    trace.set = IntervalSet::adopt_canonical(std::move(current));
    return trace;
}

inline IntervalSet projection_set_recursive(const FractalSpec& spec, const RotationWord& word,
                                            double theta, const ProjectionCaps& caps = {}) {
    return projection_levels_recursive(spec, word, theta, caps).set;
}

// Brute-force engine: enumerate every generation-n disk, project, union.
// Any mode; memory-capped.
inline IntervalSet projection_set_enumerated(const FractalSpec& spec, const RotationWord& word,
                                             double theta, const ProjectionCaps& caps = {}) {
    const std::vector<Disk> disks = enumerate_disks(spec, word, caps.max_disks);
    if (disks.size() > caps.max_intervals) {
        throw resource_error("projection exceeds max_intervals cap (" +
                             std::to_string(caps.max_intervals) + ")");
    }
    std::vector<Interval> raw;
    raw.reserve(disks.size());
    for (const Disk& disk : disks) raw.push_back(project_disk(disk, theta));
    std::sort(raw.begin(), raw.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    detail::canonicalize_sorted(raw);
    return IntervalSet::adopt_canonical(std::move(raw));
}

}  // namespace favardlab
