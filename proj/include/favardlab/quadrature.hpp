#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "favardlab/errors.hpp"

namespace favardlab {

struct QuadResult {
    double value = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

namespace detail {

template <typename F>
double adaptive_simpson_panel(F& f, double a, double fa, double b, double fb, double m, double fm,
                              double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_panel(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_panel(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Composite Simpson with error-driven panel splitting. init_panels uniform
// panels to start; each refines until the local Richardson estimate meets
// its share of abs_tol. Handles integrands with isolated kinks.
template <typename F>
double adaptive_simpson(F f, double a, double b, double abs_tol, int init_panels = 8,
                        int max_depth = 30) {
    if (!(b >= a)) throw input_error("adaptive_simpson requires b >= a");
    if (init_panels < 1) throw input_error("adaptive_simpson requires at least one panel");
    const double h = (b - a) / init_panels;
    const double panel_tol = abs_tol / init_panels;
    double total = 0.0;
    for (int i = 0; i < init_panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i + 1 == init_panels) ? b : a + (i + 1) * h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0);
        const double f1 = f(x1);
        const double fm = f(xm);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += detail::adaptive_simpson_panel(f, x0, f0, x1, f1, xm, fm, whole, panel_tol,
                                                max_depth);
    }
    return total;
}

// Composite Simpson on a uniform grid, doubling the grid until two
// successive values differ by less than tol.
template <typename F>
QuadResult composite_simpson_doubling(F f, double a, double b, std::size_t init_intervals,
                                      double tol, std::size_t max_intervals = (1u << 22)) {
    if (!(b > a)) throw input_error("integration range must have b > a");
    std::size_t n = init_intervals < 2 ? 2 : init_intervals;
    if (n % 2 == 1) ++n;

    QuadResult res;
    auto simpson = [&](std::size_t intervals) {
        const double h = (b - a) / static_cast<double>(intervals);
        double odd = 0.0, even = 0.0;
        for (std::size_t i = 1; i < intervals; i += 2) odd += f(a + i * h);
        for (std::size_t i = 2; i < intervals; i += 2) even += f(a + i * h);
        res.evals += intervals + 1;
        return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
    };

    double prev = simpson(n);
    while (n < max_intervals) {
        n *= 2;
        const double next = simpson(n);
        if (std::abs(next - prev) < tol) {
            res.value = next;
            res.converged = true;
            return res;
        }
        prev = next;
    }
    res.value = prev;
    return res;
}

// Composite midpoint with the same doubling scheme; midpoint never samples
// panel boundaries, which suits integrands with kinks at known break lines.
template <typename F>
QuadResult composite_midpoint_doubling(F f, double a, double b, std::size_t init_points,
                                       double tol, std::size_t max_points = (1u << 22)) {
    if (!(b > a)) throw input_error("integration range must have b > a");
    std::size_t n = init_points < 1 ? 1 : init_points;

    QuadResult res;
    auto midpoint = [&](std::size_t points) {
        const double h = (b - a) / static_cast<double>(points);
        double sum = 0.0;
        for (std::size_t i = 0; i < points; ++i) sum += f(a + (i + 0.5) * h);
        res.evals += points;
        return h * sum;
    };

    double prev = midpoint(n);
    while (n < max_points) {
        n *= 2;
        const double next = midpoint(n);
        if (std::abs(next - prev) < tol) {
            res.value = next;
            res.converged = true;
            return res;
        }
        prev = next;
    }
    res.value = prev;
    return res;
}

}  // namespace favardlab
