#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "favardlab/geometry.hpp"
#include "favardlab/projection.hpp"

namespace favardlab {

// Flat run configuration mirroring the CLI flags. Serialized verbatim into
// every output header so runs can be reproduced from the artifact alone.
struct RunConfig {
    int degree = 4;
    int generations = 8;
    Mode mode = Mode::SharedRotation;
    std::vector<double> thetas = {0.0};
    std::uint64_t samples = 1000;
    int ntheta = 256;
    std::uint64_t seed = 12345;
    int workers = 1;
    std::uint64_t max_intervals = 30'000'000;
    std::uint64_t max_disks = kDefaultMaxDisks;
    std::string out;

    FractalSpec spec() const {
        return FractalSpec{degree, generations, mode};
    }

    SeedSpec seed_spec() const { return SeedSpec{seed}; }

    ProjectionCaps caps() const {
        return ProjectionCaps{static_cast<std::size_t>(max_intervals), max_disks};
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"degree", degree},
                              {"generations", generations},
                              {"mode", to_string(mode)},
                              {"theta", thetas},
                              {"samples", samples},
                              {"ntheta", ntheta},
                              {"seed", seed},
                              {"workers", workers},
                              {"max_intervals", max_intervals},
                              {"max_disks", max_disks},
                              {"out", out}};
    }

    // Config as embedded in output headers. Worker count and output path
    // place the run on a machine but cannot change any emitted number, so
    // they stay out of the header and outputs stay byte-identical across
    // worker counts.
    nlohmann::json embed_json() const {
        nlohmann::json j = to_json();
        j.erase("workers");
        j.erase("out");
        return j;
    }

    // Applies the keys present in j on top of the current values. Unknown
    // keys are rejected to catch typos.
    void apply_json(const nlohmann::json& j) {
        if (!j.is_object()) throw input_error("config must be a JSON object");
        for (const auto& [key, value] : j.items()) {
            try {
                if (key == "degree") {
                    degree = value.get<int>();
                } else if (key == "generations") {
                    generations = value.get<int>();
                } else if (key == "mode") {
                    mode = mode_from_string(value.get<std::string>());
                } else if (key == "theta") {
                    if (value.is_array()) {
                        thetas = value.get<std::vector<double>>();
                    } else {
                        thetas = {value.get<double>()};
                    }
                } else if (key == "samples") {
                    samples = value.get<std::uint64_t>();
                } else if (key == "ntheta") {
                    ntheta = value.get<int>();
                } else if (key == "seed") {
                    seed = value.get<std::uint64_t>();
                } else if (key == "workers") {
                    workers = value.get<int>();
                } else if (key == "max_intervals") {
                    max_intervals = value.get<std::uint64_t>();
                } else if (key == "max_disks") {
                    max_disks = value.get<std::uint64_t>();
                } else if (key == "out") {
                    out = value.get<std::string>();
                } else {
                    throw input_error("unknown config key '" + key + "'");
                }
            } catch (const nlohmann::json::exception& e) {
                throw input_error("bad value for config key '" + key + "': " + e.what());
            }
        }
    }
};

}  // namespace favardlab
