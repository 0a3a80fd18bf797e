#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "favardlab/config.hpp"
#include "favardlab/json_io.hpp"
#include "test_util.hpp"

using namespace favardlab;

TEST_CASE("config json round trip") {
    RunConfig cfg;
    cfg.degree = 5;
    cfg.generations = 7;
    cfg.mode = Mode::PerNode;
    cfg.thetas = {0.0, 0.5};
    cfg.samples = 123;
    cfg.seed = 0xDEADBEEFull;
    cfg.workers = 3;
    cfg.out = "x";

    RunConfig back;
    back.apply_json(cfg.to_json());
    CHECK(back.degree == 5);
    CHECK(back.generations == 7);
    CHECK(back.mode == Mode::PerNode);
    CHECK(back.thetas == std::vector<double>{0.0, 0.5});
    CHECK(back.samples == 123);
    CHECK(back.seed == 0xDEADBEEFull);
    CHECK(back.workers == 3);
    CHECK(back.out == "x");
    CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("config applies partial objects on top of defaults") {
    RunConfig cfg;
    cfg.apply_json(nlohmann::json{{"degree", 3}, {"theta", 0.25}});
    CHECK(cfg.degree == 3);
    CHECK(cfg.thetas == std::vector<double>{0.25});
    CHECK(cfg.generations == 8);  // untouched default
}

TEST_CASE("config rejects unknown keys and bad values") {
    RunConfig cfg;
    CHECK_THROWS_AS(cfg.apply_json(nlohmann::json{{"degre", 3}}), input_error);
    CHECK_THROWS_AS(cfg.apply_json(nlohmann::json{{"degree", "four"}}), input_error);
    CHECK_THROWS_AS(cfg.apply_json(nlohmann::json{{"mode", "spin"}}), input_error);
    CHECK_THROWS_AS(cfg.apply_json(nlohmann::json::array()), input_error);
}

TEST_CASE("embedded config drops placement-only fields") {
    RunConfig cfg;
    cfg.workers = 8;
    cfg.out = "somewhere";
    const nlohmann::json j = cfg.embed_json();
    CHECK_FALSE(j.contains("workers"));
    CHECK_FALSE(j.contains("out"));
    CHECK(j.contains("seed"));
    CHECK(j.contains("degree"));
}

TEST_CASE("interval set json round trip preserves endpoints") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        const IntervalSet s = testutil::random_canonical_set(rng, 20, -3.0, 3.0);
        const IntervalSet back = interval_set_from_json(interval_set_to_json(s));
        REQUIRE(back.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(back.intervals()[i].lo == s.intervals()[i].lo);
            CHECK(back.intervals()[i].hi == s.intervals()[i].hi);
        }
    }
    CHECK_THROWS_AS(interval_set_from_json(nlohmann::json{{"lo", 1}}), input_error);
    CHECK_THROWS_AS(interval_set_from_json(nlohmann::json::array({{1.0, 2.0, 3.0}})), input_error);
}
