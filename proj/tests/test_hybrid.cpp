#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "teamseg/errors.hpp"
#include "teamseg/hybrid.hpp"

using namespace teamseg;

namespace {

Image three_window_image(std::array<uint8_t, 3> c1a, std::array<uint8_t, 3> c2a,
                         std::array<uint8_t, 3> c1b) {
    // 12x4 frame, three 4x4 windows side by side
    Image img(12, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 12; ++x) {
            const auto& c = x < 4 ? c1a : x < 8 ? c2a : c1b;
            img.set(x, y, c[0], c[1], c[2]);
        }
    return img;
}

struct Windows {
    Region j1a, j2a, j1b;
};

Windows three_windows() {
    return {window_region(0, 0, 4, 4, 12, 4), window_region(4, 0, 4, 4, 12, 4),
            window_region(8, 0, 4, 4, 12, 4)};
}

} // namespace

TEST_SUITE("hybrid") {

TEST_CASE("discriminant is between-team minus within-team distance") {
    CHECK(discriminant(0.8, 0.7, 0.3) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(discriminant(0.5, 0.5, 0.5) == 0.0);
    CHECK(discriminant(0.1, 0.9, 0.5) == doctest::Approx(-0.4).epsilon(1e-14));
}

TEST_CASE("region_mean averages the plane over the region") {
    Plane p;
    p.width = 4;
    p.height = 1;
    p.samples = {1, 2, 3, 100};
    Region r = window_region(0, 0, 3, 1, 4, 1);
    CHECK(region_mean(r, p) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("level ranking on black versus white ties break in declaration order") {
    Image img = three_window_image({0, 0, 0}, {0, 0, 0}, {255, 255, 255});
    Windows w = three_windows();
    HybridSpace space = select_hybrid_space(img, w.j1a, w.j2a, w.j1b);

    REQUIRE(space.ranking.size() == size_t(kColorLevelCount));
    for (size_t i = 1; i < space.ranking.size(); ++i)
        CHECK(space.ranking[i - 1].criterion >= space.ranking[i].criterion);

    // many levels tie at criterion 1; the raw channels are declared first
    CHECK(space.levels[0] == ColorLevel::Red);
    CHECK(space.levels[1] == ColorLevel::Green);
    CHECK(space.levels[2] == ColorLevel::Blue);
    CHECK(space.ranking[0].criterion == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("separable team colors classify their own windows perfectly") {
    Image img = three_window_image({200, 60, 30}, {190, 70, 40}, {30, 120, 200});
    Windows w = three_windows();
    HybridSpace space = select_hybrid_space(img, w.j1a, w.j2a, w.j1b);
    CHECK(space.ranking[0].criterion > 0.0);

    TeamModel a = make_team_model("A", img, std::vector<Region>{w.j1a, w.j2a}, space);
    TeamModel b = make_team_model("B", img, std::vector<Region>{w.j1b}, space);

    CHECK(classify_hybrid(w.j1a, img, space, a, b).label == "A");
    CHECK(classify_hybrid(w.j2a, img, space, a, b).label == "A");
    CHECK(classify_hybrid(w.j1b, img, space, a, b).label == "B");
}

TEST_CASE("indistinguishable windows are refused") {
    Image img = three_window_image({5, 5, 5}, {5, 5, 5}, {5, 5, 5});
    Windows w = three_windows();
    CHECK_THROWS_AS(select_hybrid_space(img, w.j1a, w.j2a, w.j1b), NumericError);
}

TEST_CASE("a space with no positive criterion is only a warning") {
    // team A spans black to white and team B coincides with A's first window,
    // so between-team distance can never beat within-team distance
    Image img = three_window_image({0, 0, 0}, {255, 255, 255}, {0, 0, 0});
    Windows w = three_windows();
    oracle::WarnCapture warns;
    HybridSpace space = select_hybrid_space(img, w.j1a, w.j2a, w.j1b);
    CHECK(space.ranking[0].criterion <= 0.0);
    CHECK(!warns.messages().empty());
}

TEST_CASE("region coordinates are normalized level means") {
    HybridSpace space;
    space.levels = {ColorLevel::Red, ColorLevel::Green, ColorLevel::Blue};
    space.norms = {LevelNorm{0, 255}, LevelNorm{0, 255}, LevelNorm{0, 255}};

    Image img(2, 2);
    for (size_t i = 0; i < img.pixels(); ++i) {
        img.r[i] = 51;
        img.g[i] = 102;
        img.b[i] = 204;
    }
    Region r = window_region(0, 0, 2, 2, 2, 2);
    auto coords = region_coordinates(r, img, space);
    CHECK(coords[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(coords[1] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(coords[2] == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("degenerate normalization maps everything to zero") {
    LevelNorm flat{7.0, 7.0};
    CHECK(flat.apply(7.0) == 0.0);
    CHECK(flat.apply(100.0) == 0.0);
}

TEST_CASE("nearest model wins with both distances reported") {
    TeamModel a{"A", {0.2, 0.2, 0.2}};
    TeamModel b{"B", {0.8, 0.8, 0.8}};
    HybridDecision d = classify_hybrid_means({0.4, 0.4, 0.4}, a, b);
    CHECK(d.label == "A");
    CHECK(d.dist_a == doctest::Approx(std::sqrt(0.12)).epsilon(1e-14));
    CHECK(d.dist_b == doctest::Approx(std::sqrt(0.48)).epsilon(1e-14));

    HybridDecision e = classify_hybrid_means({0.7, 0.8, 0.9}, a, b);
    CHECK(e.label == "B");
}

TEST_CASE("an exact distance tie is refused with both distances") {
    TeamModel a{"A", {0.0, 0.0, 0.0}};
    TeamModel b{"B", {1.0, 0.0, 0.0}};
    try {
        classify_hybrid_means({0.5, 0.0, 0.0}, a, b);
        FAIL("expected TieError");
    } catch (const TieError& tie) {
        CHECK(tie.first() == 0.5);
        CHECK(tie.second() == 0.5);
    }
}

TEST_CASE("the decision is invariant under a common offset") {
    Rng rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        std::array<double, 3> coords, offset;
        TeamModel a{"A", {}}, b{"B", {}};
        for (int i = 0; i < 3; ++i) {
            coords[size_t(i)] = rng.uniform(-5, 5);
            a.mean[size_t(i)] = rng.uniform(-5, 5);
            b.mean[size_t(i)] = rng.uniform(-5, 5);
            offset[size_t(i)] = rng.uniform(-100, 100);
        }
        HybridDecision base = classify_hybrid_means(coords, a, b);

        std::array<double, 3> coords2 = coords;
        TeamModel a2 = a, b2 = b;
        for (int i = 0; i < 3; ++i) {
            coords2[size_t(i)] += offset[size_t(i)];
            a2.mean[size_t(i)] += offset[size_t(i)];
            b2.mean[size_t(i)] += offset[size_t(i)];
        }
        HybridDecision shifted = classify_hybrid_means(coords2, a2, b2);
        CHECK(shifted.label == base.label);
        CHECK(shifted.dist_a == doctest::Approx(base.dist_a).epsilon(1e-9));
        CHECK(shifted.dist_b == doctest::Approx(base.dist_b).epsilon(1e-9));
    }
}

} // TEST_SUITE
