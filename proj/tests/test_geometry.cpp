#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "favardlab/geometry.hpp"

using namespace favardlab;
using Catch::Matchers::WithinAbs;

namespace {

Point compose_maps(const FractalSpec& spec, const std::vector<int>& digits,
                   const std::vector<double>& omegas) {
    // innermost first: z = T_{j1}(T_{j2}(... T_{jn}(0)))
    Point z{0.0, 0.0};
    for (std::size_t i = digits.size(); i-- > 0;) {
        z = subdisk_map(spec, digits[i], omegas[i], z);
    }
    return z;
}

}  // namespace

TEST_CASE("subdisk_map places the child centers") {
    const FractalSpec d4{4, 1, Mode::Deterministic};
    const Point p0 = subdisk_map(d4, 0, 0.0, {0.0, 0.0});
    CHECK_THAT(p0.x, WithinAbs(0.75, 1e-15));
    CHECK_THAT(p0.y, WithinAbs(0.0, 1e-15));
    const Point p1 = subdisk_map(d4, 1, 0.0, {0.0, 0.0});
    CHECK_THAT(p1.x, WithinAbs(0.0, 1e-15));
    CHECK_THAT(p1.y, WithinAbs(0.75, 1e-15));

    // child disk of radius 1/3 around the image of (1,0) stays tangent to
    // the unit circle at (1,0)
    const FractalSpec d3{3, 1, Mode::Deterministic};
    const Point q = subdisk_map(d3, 0, 0.0, {1.0, 0.0});
    CHECK_THAT(q.x, WithinAbs(1.0, 1e-15));
    CHECK_THAT(q.y, WithinAbs(0.0, 1e-15));

    CHECK_THROWS_AS(subdisk_map(d4, 4, 0.0, {0.0, 0.0}), input_error);
    CHECK_THROWS_AS(subdisk_map(d4, -1, 0.0, {0.0, 0.0}), input_error);
}

TEST_CASE("enumerate_disks level one and two") {
    const FractalSpec spec{4, 1, Mode::SharedRotation};
    const auto disks = enumerate_disks(spec, RotationWord::shared({0.0}));
    REQUIRE(disks.size() == 4);
    for (const Disk& d : disks) CHECK_THAT(d.radius, WithinAbs(0.25, 0.0));
    CHECK_THAT(disks[0].center.x, WithinAbs(0.75, 1e-15));
    CHECK_THAT(disks[1].center.y, WithinAbs(0.75, 1e-15));
    CHECK_THAT(disks[2].center.x, WithinAbs(-0.75, 1e-15));
    CHECK_THAT(disks[3].center.y, WithinAbs(-0.75, 1e-15));

    const FractalSpec spec2{4, 2, Mode::SharedRotation};
    const auto disks2 = enumerate_disks(spec2, RotationWord::shared({0.0, 0.0}));
    REQUIRE(disks2.size() == 16);
    for (const Disk& d : disks2) CHECK_THAT(d.radius, WithinAbs(1.0 / 16.0, 0.0));
    // digit string (0,0): 3/4 + 3/16
    CHECK_THAT(disks2[0].center.x, WithinAbs(15.0 / 16.0, 1e-15));
    CHECK_THAT(disks2[0].center.y, WithinAbs(0.0, 1e-15));
}

TEST_CASE("generation zero is the unit disk") {
    const FractalSpec spec{4, 0, Mode::SharedRotation};
    const auto disks = enumerate_disks(spec, RotationWord::shared({}));
    REQUIRE(disks.size() == 1);
    CHECK(disks[0].radius == 1.0);
    CHECK(disks[0].center.x == 0.0);
}

TEST_CASE("enumerate_disks matches composed maps on random words") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 3 + static_cast<int>(rng() % 3);
        const int n = 1 + static_cast<int>(rng() % 4);
        const FractalSpec spec{d, n, Mode::SharedRotation};
        std::uniform_real_distribution<double> u(0.0, spec.angle_range() * 0.999);
        std::vector<double> omegas(n);
        for (double& w : omegas) w = u(rng);
        const auto disks = enumerate_disks(spec, RotationWord::shared(omegas));

        // spot-check a few digit strings against direct map composition
        for (int probe = 0; probe < 5; ++probe) {
            std::size_t index = rng() % disks.size();
            std::vector<int> digits(n);
            std::size_t rest = index;
            for (int l = n - 1; l >= 0; --l) {
                digits[l] = static_cast<int>(rest % d);
                rest /= d;
            }
            const Point z = compose_maps(spec, digits, omegas);
            CHECK_THAT(disks[index].center.x, WithinAbs(z.x, 1e-12));
            CHECK_THAT(disks[index].center.y, WithinAbs(z.y, 1e-12));
        }
    }
}

TEST_CASE("radius law and nesting") {
    const FractalSpec spec{5, 3, Mode::SharedRotation};
    const SeedSpec seed{11};
    const RotationWord word = sample_word(spec, seed, 0);
    const auto level3 = enumerate_disks(spec, word);
    CHECK(level3.size() == 125);
    for (const Disk& d : level3) CHECK_THAT(d.radius, WithinAbs(std::pow(5.0, -3), 1e-18));

    FractalSpec spec2 = spec;
    spec2.generations = 2;
    const RotationWord prefix =
        RotationWord::shared({word.angle(0), word.angle(1)});
    const auto level2 = enumerate_disks(spec2, prefix);
    // child i sits inside parent i/d and only that one
    for (std::size_t i = 0; i < level3.size(); ++i) {
        std::size_t containing = 0;
        for (std::size_t p = 0; p < level2.size(); ++p) {
            const double dist = std::hypot(level3[i].center.x - level2[p].center.x,
                                           level3[i].center.y - level2[p].center.y);
            if (dist + level3[i].radius <= level2[p].radius + 1e-12) {
                ++containing;
                CHECK(p == i / 5);
            }
        }
        CHECK(containing == 1);
    }
}

TEST_CASE("validate_geometry accepts the construction") {
    SECTION("level one, zero rotation") {
        const FractalSpec spec{4, 1, Mode::SharedRotation};
        const auto parents = enumerate_disks(FractalSpec{4, 0, Mode::SharedRotation},
                                             RotationWord::shared({}));
        const auto children = enumerate_disks(spec, RotationWord::shared({0.0}));
        // |(3/4, 0)| + 1/4 = 1 and sibling separation (3/4)sqrt(2) > 1/2
        const GeometryReport rep = validate_geometry(parents, children, 4);
        CHECK(rep.ok());
        CHECK(rep.failures.empty());
    }
    SECTION("degree 3 random word, both levels") {
        const FractalSpec spec{3, 2, Mode::SharedRotation};
        const SeedSpec seed{77};
        const RotationWord word = sample_word(spec, seed, 3);
        const auto children = enumerate_disks(spec, word);
        FractalSpec pspec = spec;
        pspec.generations = 1;
        const auto parents = enumerate_disks(pspec, RotationWord::shared({word.angle(0)}));
        const GeometryReport rep = validate_geometry(parents, children, 3);
        CHECK(rep.ok());

        // independent brute-force disjointness of all 9 disks
        for (std::size_t i = 0; i < children.size(); ++i) {
            for (std::size_t j = i + 1; j < children.size(); ++j) {
                const double dist = std::hypot(children[i].center.x - children[j].center.x,
                                               children[i].center.y - children[j].center.y);
                CHECK(dist > children[i].radius + children[j].radius - 1e-12);
            }
        }
    }
    SECTION("tampered child is caught") {
        const FractalSpec spec{4, 1, Mode::SharedRotation};
        const auto parents = enumerate_disks(FractalSpec{4, 0, Mode::SharedRotation},
                                             RotationWord::shared({}));
        auto children = enumerate_disks(spec, RotationWord::shared({0.0}));
        children[0].center.x += 0.2;
        const GeometryReport rep = validate_geometry(parents, children, 4);
        CHECK_FALSE(rep.tangency_ok);
        CHECK_FALSE(rep.ok());
    }
}

TEST_CASE("per-node words rotate nodes independently") {
    const FractalSpec spec{4, 2, Mode::PerNode};
    const SeedSpec seed{4242};
    const RotationWord word = sample_word(spec, seed, 0);
    REQUIRE(word.per_node_layout());
    REQUIRE(word.levels()[0].size() == 1);
    REQUIRE(word.levels()[1].size() == 4);
    const auto disks = enumerate_disks(spec, word);
    REQUIRE(disks.size() == 16);

    // tangency/disjointness still holds with independent rotations
    FractalSpec pspec = spec;
    pspec.generations = 1;
    const RotationWord prefix = RotationWord::per_node({word.levels()[0]});
    const auto parents = enumerate_disks(pspec, prefix);
    CHECK(validate_geometry(parents, disks, 4).ok());

    // word validation
    CHECK_NOTHROW(word.validate_against(spec));
    CHECK_THROWS_AS(RotationWord::shared({0.0, 0.0}).validate_against(spec), input_error);
}

TEST_CASE("deterministic mode reproduces the unrotated centers") {
    const FractalSpec spec{4, 3, Mode::Deterministic};
    const RotationWord word = sample_word(spec, SeedSpec{123}, 9);
    const auto disks = enumerate_disks(spec, word);
    const auto zero = enumerate_disks(FractalSpec{4, 3, Mode::SharedRotation},
                                      RotationWord::zeros(3));
    REQUIRE(disks.size() == zero.size());
    for (std::size_t i = 0; i < disks.size(); ++i) {
        CHECK(disks[i].center.x == zero[i].center.x);
        CHECK(disks[i].center.y == zero[i].center.y);
    }
}

TEST_CASE("disk cap raises a resource error naming the cap") {
    const FractalSpec spec{4, 12, Mode::Deterministic};
    try {
        enumerate_disks(spec, RotationWord::zeros(12), 1'000'000);
        FAIL("expected resource_error");
    } catch (const resource_error& e) {
        CHECK(std::string(e.what()).find("1000000") != std::string::npos);
    }
}

TEST_CASE("construction parameters are validated") {
    CHECK_THROWS_AS((FractalSpec{2, 1, Mode::SharedRotation}.validate()), input_error);
    CHECK_THROWS_AS((FractalSpec{4, -1, Mode::SharedRotation}.validate()), input_error);
    CHECK_THROWS_AS(
        RotationWord::shared({0.0}).validate_against(FractalSpec{4, 2, Mode::SharedRotation}),
        input_error);
    CHECK_THROWS_AS(
        RotationWord::shared({7.0}).validate_against(FractalSpec{4, 1, Mode::SharedRotation}),
        input_error);
}
