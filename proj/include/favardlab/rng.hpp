#pragma once

#include <cstdint>
#include <numbers>
#include <string>

#include "favardlab/errors.hpp"

namespace favardlab {

// Counter-based uniform angle source.
//
// Every draw is addressed by (sample_index, slot) and produced by the
// SplitMix64 finalizer applied to master_seed + counter * kSplitMixGamma,
// with counter = sample_index * 2^20 + slot. Stateless, so any worker can
// evaluate any draw in any order and get the same value.
//
// Slot layout, 20 bits:
//   shared rotation   slot = level              (level 0 = outermost angle)
//   per-node rotation slot = number of nodes in all shallower levels
//                            + breadth-first node index within the level
// Per-node words therefore fit as long as the whole tree above the leaf
// level has fewer than 2^20 nodes.

struct SeedSpec {
    std::uint64_t master_seed = 12345;
};

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;
inline constexpr int kSlotBits = 20;
inline constexpr std::uint64_t kMaxSlots = 1ull << kSlotBits;

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Uniform in [0, 1); top 53 bits of the mixed word.
inline double uniform01(std::uint64_t master_seed, std::uint64_t counter) {
    const std::uint64_t x = splitmix64_finalize(master_seed + counter * kSplitMixGamma);
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline std::uint64_t pack_counter(std::uint64_t sample_index, std::uint64_t slot) {
    if (slot >= kMaxSlots) {
        throw layout_overflow_error("stream slot " + std::to_string(slot) +
                                    " exceeds the 2^20 slot layout");
    }
    return (sample_index << kSlotBits) | slot;
}

// Angle in [0, 2*pi/degree) for one (sample, level) pair of a shared word.
inline double uniform_angle(const SeedSpec& seed, std::uint64_t sample_index,
                            std::uint64_t level_index, int degree) {
    if (degree < 3) throw input_error("degree must be >= 3");
    const double u = uniform01(seed.master_seed, pack_counter(sample_index, level_index));
    return u * (2.0 * std::numbers::pi / degree);
}

// Slot of the node that owns the angles used to split it: all nodes of
// shallower levels come first, then breadth-first order within the level.
inline std::uint64_t per_node_slot(int degree, int level, std::uint64_t node_index) {
    if (degree < 3) throw input_error("degree must be >= 3");
    if (level < 0) throw input_error("level index must be >= 0");
    std::uint64_t level_size = 1;   // degree^level
    std::uint64_t before = 0;       // nodes in levels 0 .. level-1
    for (int l = 0; l < level; ++l) {
        before += level_size;
        level_size *= static_cast<std::uint64_t>(degree);
        if (before + level_size > kMaxSlots) {
            throw layout_overflow_error("per-node layout for degree " + std::to_string(degree) +
                                        " overflows 2^20 slots at level " + std::to_string(level));
        }
    }
    if (node_index >= level_size) throw input_error("node index out of range for level");
    return before + node_index;
}

inline double uniform_angle_node(const SeedSpec& seed, std::uint64_t sample_index,
                                 int degree, int level, std::uint64_t node_index) {
    const std::uint64_t slot = per_node_slot(degree, level, node_index);
    const double u = uniform01(seed.master_seed, pack_counter(sample_index, slot));
    return u * (2.0 * std::numbers::pi / degree);
}

// Sequential view of the counter stream, for consumers that just need a
// portable deterministic uniform source.
struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    double next01() { return uniform01(seed, counter++); }
};

}  // namespace favardlab
