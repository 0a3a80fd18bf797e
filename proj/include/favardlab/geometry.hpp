#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "favardlab/errors.hpp"
#include "favardlab/rng.hpp"

namespace favardlab {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Disk {
    Point center;
    double radius = 1.0;
};

enum class Mode { SharedRotation, PerNode, Deterministic };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::SharedRotation: return "shared";
        case Mode::PerNode: return "pernode";
        case Mode::Deterministic: return "deterministic";
    }
    return "shared";
}

inline Mode mode_from_string(std::string_view s) {
    if (s == "shared") return Mode::SharedRotation;
    if (s == "pernode") return Mode::PerNode;
    if (s == "deterministic") return Mode::Deterministic;
    throw input_error("unknown mode '" + std::string(s) +
                      "' (expected shared, pernode or deterministic)");
}

// Family of similarities: degree-many children of ratio 1/degree, centers at
// distance (degree-1)/degree from the parent center on an evenly spaced star
// that a rotation word may turn level by level.
struct FractalSpec {
    int degree = 4;
    int generations = 0;
    Mode mode = Mode::SharedRotation;

    void validate() const {
        if (degree < 3) throw input_error("degree must be >= 3");
        if (generations < 0) throw input_error("generations must be >= 0");
    }

    double contraction() const { return 1.0 / degree; }
    double center_distance() const { return static_cast<double>(degree - 1) / degree; }
    // Angles live in [0, 2*pi/degree).
    double angle_range() const { return 2.0 * std::numbers::pi / degree; }
};

// Per-level rotation angles. levels()[l] holds the angles used when the
// level-l disks are split: one entry for a shared word, degree^l entries
// (breadth-first node order) for a per-node word.
class RotationWord {
public:
    RotationWord() = default;

    static RotationWord shared(std::vector<double> angles) {
        RotationWord w;
        w.per_node_ = false;
        w.levels_.reserve(angles.size());
        for (double a : angles) w.levels_.push_back({a});
        return w;
    }

    static RotationWord per_node(std::vector<std::vector<double>> levels) {
        RotationWord w;
        w.per_node_ = true;
        w.levels_ = std::move(levels);
        return w;
    }

    static RotationWord zeros(int generations) {
        return shared(std::vector<double>(static_cast<std::size_t>(generations), 0.0));
    }

    int generations() const { return static_cast<int>(levels_.size()); }
    bool per_node_layout() const { return per_node_; }
    const std::vector<std::vector<double>>& levels() const { return levels_; }

    double angle(int level) const { return levels_[level][0]; }
    double angle(int level, std::uint64_t node) const {
        const auto& row = levels_[level];
        return per_node_ ? row[node] : row[0];
    }

    void validate_against(const FractalSpec& spec) const {
        spec.validate();
        if (generations() != spec.generations) {
            throw input_error("rotation word length " + std::to_string(generations()) +
                              " does not match generations " + std::to_string(spec.generations));
        }
        if (per_node_ && spec.mode != Mode::PerNode) {
            throw input_error("per-node word supplied for a shared-rotation spec");
        }
        if (!per_node_ && spec.mode == Mode::PerNode && spec.generations > 1) {
            throw input_error("per-node spec requires a per-node word");
        }
        std::uint64_t expect = 1;
        for (int l = 0; l < generations(); ++l) {
            const auto& row = levels_[l];
            if (per_node_) {
                if (row.size() != expect) {
                    throw input_error("per-node level " + std::to_string(l) + " must hold " +
                                      std::to_string(expect) + " angles");
                }
                expect *= static_cast<std::uint64_t>(spec.degree);
            } else if (row.size() != 1) {
                throw input_error("shared word level must hold exactly one angle");
            }
            for (double a : row) {
                if (!(a >= 0.0) || !(a < spec.angle_range())) {
                    throw input_error("angle out of [0, 2*pi/degree)");
                }
            }
        }
    }

private:
    bool per_node_ = false;
    std::vector<std::vector<double>> levels_;
};

// Draw the word for one Monte Carlo sample. Deterministic mode draws nothing.
inline RotationWord sample_word(const FractalSpec& spec, const SeedSpec& seed,
                                std::uint64_t sample_index) {
    spec.validate();
    const int n = spec.generations;
    switch (spec.mode) {
        case Mode::Deterministic:
            return RotationWord::zeros(n);
        case Mode::SharedRotation: {
            std::vector<double> angles(static_cast<std::size_t>(n));
            for (int l = 0; l < n; ++l) {
                angles[l] = uniform_angle(seed, sample_index, static_cast<std::uint64_t>(l),
                                          spec.degree);
            }
            return RotationWord::shared(std::move(angles));
        }
        case Mode::PerNode: {
            std::vector<std::vector<double>> levels(static_cast<std::size_t>(n));
            std::uint64_t level_size = 1;
            for (int l = 0; l < n; ++l) {
                levels[l].resize(level_size);
                for (std::uint64_t m = 0; m < level_size; ++m) {
                    levels[l][m] = uniform_angle_node(seed, sample_index, spec.degree, l, m);
                }
                level_size *= static_cast<std::uint64_t>(spec.degree);
            }
            return RotationWord::per_node(std::move(levels));
        }
    }
    throw input_error("unknown mode");
}

// One similarity: z / degree + center_distance * e^{i(2*pi*branch/degree - omega)}.
// The linear part carries no rotation; omega only moves the child center.
inline Point subdisk_map(const FractalSpec& spec, int branch, double omega, Point z) {
    spec.validate();
    if (branch < 0 || branch >= spec.degree) {
        throw input_error("branch index " + std::to_string(branch) +
                          " out of range for degree " + std::to_string(spec.degree));
    }
    const double phi = 2.0 * std::numbers::pi * branch / spec.degree - omega;
    const double rho = spec.center_distance();
    return {z.x / spec.degree + rho * std::cos(phi),
            z.y / spec.degree + rho * std::sin(phi)};
}

inline constexpr std::uint64_t kDefaultMaxDisks = 4'194'304;

// All degree^n generation-n disks, in digit-lexicographic order, so the
// parent of disks[i] at the previous level is disks[i / degree].
inline std::vector<Disk> enumerate_disks(const FractalSpec& spec, const RotationWord& word,
                                         std::uint64_t max_disks = kDefaultMaxDisks) {
    word.validate_against(spec);
    const int n = spec.generations;
    const int d = spec.degree;

    std::uint64_t count = 1;
    for (int l = 0; l < n; ++l) {
        count *= static_cast<std::uint64_t>(d);
        if (count > max_disks) {
            throw resource_error("degree^" + std::to_string(n) + " disks exceed max_disks cap (" +
                                 std::to_string(max_disks) + ")");
        }
    }

    std::vector<Point> centers{Point{0.0, 0.0}};
    double step = spec.center_distance();  // (d-1)/d^{level+1}
    for (int l = 0; l < n; ++l) {
        std::vector<Point> next;
        next.reserve(centers.size() * static_cast<std::size_t>(d));
        for (std::uint64_t m = 0; m < centers.size(); ++m) {
            const double omega = word.angle(l, m);
            for (int j = 0; j < d; ++j) {
                const double phi = 2.0 * std::numbers::pi * j / d - omega;
                next.push_back({centers[m].x + step * std::cos(phi),
                                centers[m].y + step * std::sin(phi)});
            }
        }
        centers = std::move(next);
        step /= d;
    }

    const double radius = std::pow(static_cast<double>(d), -n);
    std::vector<Disk> disks;
    disks.reserve(centers.size());
    for (const Point& c : centers) disks.push_back({c, radius});
    return disks;
}

struct GeometryReport {
    bool tangency_ok = true;
    bool siblings_disjoint = true;
    bool level_disjoint = true;
    std::size_t checks = 0;
    std::vector<std::string> failures;

    bool ok() const { return tangency_ok && siblings_disjoint && level_disjoint; }
};

namespace detail {

inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace detail

// Checks the construction promises between two consecutive generations:
// every child internally tangent to its parent, siblings pairwise disjoint,
// and the whole child generation pairwise disjoint.
inline GeometryReport validate_geometry(const std::vector<Disk>& parents,
                                        const std::vector<Disk>& children, int degree,
                                        double tol = 1e-12) {
    if (degree < 3) throw input_error("degree must be >= 3");
    if (children.size() != parents.size() * static_cast<std::size_t>(degree)) {
        throw input_error("child list must hold degree * parents disks");
    }
    GeometryReport rep;
    auto fail = [&rep](bool& flag, std::string msg) {
        flag = false;
        if (rep.failures.size() < 32) rep.failures.push_back(std::move(msg));
    };

    for (std::size_t i = 0; i < children.size(); ++i) {
        const Disk& child = children[i];
        const Disk& parent = parents[i / static_cast<std::size_t>(degree)];
        ++rep.checks;
        const double gap = detail::dist(child.center, parent.center) + child.radius - parent.radius;
        if (std::abs(gap) > tol) {
            fail(rep.tangency_ok, "child " + std::to_string(i) + " not internally tangent, gap " +
                                      std::to_string(gap));
        }
    }

    for (std::size_t g = 0; g < parents.size(); ++g) {
        for (int a = 0; a < degree; ++a) {
            for (int b = a + 1; b < degree; ++b) {
                const Disk& u = children[g * degree + a];
                const Disk& v = children[g * degree + b];
                ++rep.checks;
                if (detail::dist(u.center, v.center) < u.radius + v.radius - tol) {
                    fail(rep.siblings_disjoint,
                         "siblings " + std::to_string(a) + "," + std::to_string(b) +
                             " of parent " + std::to_string(g) + " overlap");
                }
            }
        }
    }

    // Sweep over x to keep the all-pairs check near-linear for tame inputs.
    std::vector<std::size_t> order(children.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&children](std::size_t a, std::size_t b) {
        return children[a].center.x < children[b].center.x;
    });
    for (std::size_t a = 0; a < order.size(); ++a) {
        const Disk& u = children[order[a]];
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const Disk& v = children[order[b]];
            if (v.center.x - u.center.x >= u.radius + v.radius) break;
            ++rep.checks;
            if (detail::dist(u.center, v.center) < u.radius + v.radius - tol) {
                fail(rep.level_disjoint, "disks " + std::to_string(order[a]) + "," +
                                             std::to_string(order[b]) + " overlap");
            }
        }
    }
    return rep;
}

}  // namespace favardlab
