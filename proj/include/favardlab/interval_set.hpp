#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "favardlab/errors.hpp"
#include "favardlab/summation.hpp"

namespace favardlab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
};

// Canonical finite union of closed intervals on the line: nonempty
// intervals, sorted, strictly separated (touching intervals are merged,
// with exact endpoint comparison -- no merge epsilon).
class IntervalSet {
public:
    IntervalSet() = default;

    static IntervalSet adopt_canonical(std::vector<Interval> intervals) {
        IntervalSet s;
        s.iv_ = std::move(intervals);
        return s;
    }

    const std::vector<Interval>& intervals() const { return iv_; }
    std::size_t size() const { return iv_.size(); }
    bool empty() const { return iv_.empty(); }

    double min() const { return iv_.front().lo; }
    double max() const { return iv_.back().hi; }

    double measure() const {
        NeumaierSum sum;
        for (const Interval& iv : iv_) sum.add(iv.length());
        return sum.value();
    }

private:
    std::vector<Interval> iv_;
};

namespace detail {

// In-place: sort by lo, drop degenerate pairs, merge touching/overlapping.
inline void canonicalize_sorted(std::vector<Interval>& v) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].lo == v[i].hi) continue;  // degenerate
        if (out > 0 && v[i].lo <= v[out - 1].hi) {
            if (v[i].hi > v[out - 1].hi) v[out - 1].hi = v[i].hi;
        } else {
            v[out++] = v[i];
        }
    }
    v.resize(out);
}

}  // namespace detail

inline IntervalSet make_interval_set(std::vector<Interval> raw) {
    for (const Interval& iv : raw) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            throw input_error("interval endpoints must be finite");
        }
        if (iv.lo > iv.hi) {
            throw input_error("interval lo must not exceed hi");
        }
    }
    std::sort(raw.begin(), raw.end(),
              [](const Interval& a, const Interval& b) {
                  return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
              });
    detail::canonicalize_sorted(raw);
    return IntervalSet::adopt_canonical(std::move(raw));
}

inline IntervalSet single_interval(double lo, double hi) {
    return make_interval_set({Interval{lo, hi}});
}

inline double measure(const IntervalSet& s) { return s.measure(); }

inline IntervalSet translate_scale(const IntervalSet& s, double scale, double shift) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift)) {
        throw input_error("translate_scale requires a finite positive scale and finite shift");
    }
    std::vector<Interval> out;
    out.reserve(s.size());
    for (const Interval& iv : s.intervals()) {
        out.push_back({scale * iv.lo + shift, scale * iv.hi + shift});
    }
    // scale > 0 keeps order; rounding can make neighbours touch
    detail::canonicalize_sorted(out);
    return IntervalSet::adopt_canonical(std::move(out));
}

inline IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    const auto& A = a.intervals();
    const auto& B = b.intervals();
    std::size_t i = 0, j = 0;
    while (i < A.size() && j < B.size()) {
        const double lo = std::max(A[i].lo, B[j].lo);
        const double hi = std::min(A[i].hi, B[j].hi);
        if (lo < hi) out.push_back({lo, hi});
        if (A[i].hi < B[j].hi) {
            ++i;
        } else {
            ++j;
        }
    }
    detail::canonicalize_sorted(out);
    return IntervalSet::adopt_canonical(std::move(out));
}

inline IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.intervals().begin(), a.intervals().end(),
               b.intervals().begin(), b.intervals().end(),
               std::back_inserter(merged),
               [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    detail::canonicalize_sorted(merged);
    return IntervalSet::adopt_canonical(std::move(merged));
}

// measure(a \ b) <= tol
inline bool subset_of(const IntervalSet& a, const IntervalSet& b, double tol) {
    return a.measure() - intersect(a, b).measure() <= tol;
}

inline bool is_canonical(const IntervalSet& s) {
    const auto& v = s.intervals();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i].lo < v[i].hi)) return false;
        if (i > 0 && !(v[i - 1].hi < v[i].lo)) return false;
    }
    return true;
}

}  // namespace favardlab
