#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "teamseg/errors.hpp"
#include "teamseg/fuzzy.hpp"

using namespace teamseg;

namespace {

FuzzySystem wide_open_system() {
    // both inputs accept everything, so fuzzify passes strengths through
    Trapezoid open{-1e9, -1e9, 1e9, 1e9};
    FuzzySystem sys;
    sys.inputs = {{"green_moy", open, open}, {"blue_moy", open, open}};
    return sys;
}

double defuzz(double sa, double sb, int grid = 101) {
    FuzzySystem sys = wide_open_system();
    sys.grid = grid;
    Memberships mem{sa, sb, 1.0, 1.0};
    return infer_and_defuzzify(mem, sys).z;
}

} // namespace

TEST_SUITE("fuzzy") {

TEST_CASE("trapezoid membership is flat on the shoulders and linear on the sides") {
    Trapezoid t{0, 1, 2, 3};
    CHECK(t.membership(-0.5) == 0.0);
    CHECK(t.membership(0.0) == 0.0);
    CHECK(t.membership(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.membership(1.0) == 1.0);
    CHECK(t.membership(1.7) == 1.0);
    CHECK(t.membership(2.0) == 1.0);
    CHECK(t.membership(2.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.membership(3.0) == 0.0);
    CHECK(t.membership(9.0) == 0.0);
}

TEST_CASE("a collapsed trapezoid is a spike") {
    Trapezoid spike{5, 5, 5, 5};
    CHECK(spike.membership(5.0) == 1.0);
    CHECK(spike.membership(5.0001) == 0.0);
    CHECK(spike.membership(4.9999) == 0.0);
}

TEST_CASE("triangle membership peaks at the apex with open feet") {
    Triangle t{0.0, 0.25, 0.5};
    CHECK(t.membership(0.0) == 0.0);
    CHECK(t.membership(0.125) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.membership(0.25) == 1.0);
    CHECK(t.membership(0.375) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.membership(0.5) == 0.0);
    CHECK(t.membership(0.75) == 0.0);
}

TEST_CASE("mean_rgb averages region pixels per channel") {
    Image img(2, 1);
    img.set(0, 0, 10, 20, 30);
    img.set(1, 0, 30, 60, 90);
    Region r = window_region(0, 0, 2, 1, 2, 1);
    auto m = mean_rgb(r, img);
    CHECK(m == std::array<double, 3>{20, 40, 60});
    CHECK_THROWS_AS(mean_rgb(Region{}, img), ConfigError);
}

TEST_CASE("membership fitting uses interpolated percentiles") {
    std::vector<std::array<double, 3>> class_a, class_b;
    for (int i = 0; i <= 10; ++i)
        class_a.push_back({0.0, 10.0 + i, 5.0}); // greens 10..20, blues all 5
    for (int i = 0; i <= 10; ++i)
        class_b.push_back({0.0, 30.0 + i, 50.0 + i});

    oracle::WarnCapture warns;
    FuzzySystem sys = fit_memberships(class_a, class_b);

    REQUIRE(sys.inputs.size() == 2);
    CHECK(sys.inputs[0].name == "green_moy");
    CHECK(sys.inputs[1].name == "blue_moy");

    const Trapezoid& g = sys.inputs[0].team_a;
    CHECK(g.a == doctest::Approx(10.5).epsilon(1e-14));
    CHECK(g.b == doctest::Approx(12.5).epsilon(1e-14));
    CHECK(g.c == doctest::Approx(17.5).epsilon(1e-14));
    CHECK(g.d == doctest::Approx(19.5).epsilon(1e-14));

    // the constant blue column collapses and is reported
    CHECK(sys.inputs[1].team_a.a == sys.inputs[1].team_a.d);
    CHECK(warns.contains("spike"));

    CHECK_THROWS_AS(fit_memberships(std::vector<std::array<double, 3>>{{1, 2, 3}}, class_b),
                    ConfigError);
}

TEST_CASE("fitted trapezoids match a percentile reference on random data") {
    Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        int n = rng.uniform_int(2, 40);
        std::vector<std::array<double, 3>> rows_a, rows_b;
        std::vector<double> greens;
        for (int i = 0; i < n; ++i) {
            double v = rng.uniform(0, 255);
            greens.push_back(v);
            rows_a.push_back({0, v, rng.uniform(0, 255)});
        }
        rows_b = rows_a; // class B content is irrelevant here
        FuzzySystem sys = fit_memberships(rows_a, rows_b);
        CHECK(sys.inputs[0].team_a.a == doctest::Approx(oracle::percentile(greens, 0.05)));
        CHECK(sys.inputs[0].team_a.b == doctest::Approx(oracle::percentile(greens, 0.25)));
        CHECK(sys.inputs[0].team_a.c == doctest::Approx(oracle::percentile(greens, 0.75)));
        CHECK(sys.inputs[0].team_a.d == doctest::Approx(oracle::percentile(greens, 0.95)));
    }
}

TEST_CASE("fuzzify reads the green and blue feature components") {
    FuzzySystem sys;
    sys.inputs = {{"green_moy", Trapezoid{0, 10, 20, 30}, Trapezoid{20, 30, 40, 50}},
                  {"blue_moy", Trapezoid{0, 0, 100, 200}, Trapezoid{100, 200, 300, 400}}};
    Memberships mem = fuzzify({999.0, 15.0, 50.0}, sys); // red mean is ignored
    CHECK(mem.green_a == 1.0);
    CHECK(mem.green_b == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(mem.blue_a == 1.0);
    CHECK(mem.blue_b == doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS(fuzzify({1, 2, 3}, FuzzySystem{}), ConfigError);
}

TEST_CASE("a single fired rule centers on its output term") {
    FuzzySystem sys = wide_open_system();

    FuzzyDecision a = infer_and_defuzzify({1.0, 0.0, 1.0, 0.0}, sys);
    CHECK(a.label == "A");
    CHECK(a.z == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(a.strength_a == 1.0);
    CHECK(a.strength_b == 0.0);

    // clipping the term keeps it symmetric, so the centroid stays put
    FuzzyDecision clipped = infer_and_defuzzify({0.37, 0.0, 1.0, 0.0}, sys);
    CHECK(clipped.z == doctest::Approx(0.25).epsilon(1e-12));

    FuzzyDecision b = infer_and_defuzzify({0.0, 1.0, 0.0, 1.0}, sys);
    CHECK(b.label == "B");
    CHECK(b.z == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("rule strength is the weaker antecedent") {
    FuzzySystem sys = wide_open_system();
    FuzzyDecision d = infer_and_defuzzify({0.9, 0.2, 0.4, 0.8}, sys);
    CHECK(d.strength_a == 0.4); // min(0.9, 0.4)
    CHECK(d.strength_b == 0.2); // min(0.2, 0.8)
    CHECK(d.label == "A");
    CHECK(d.z < 0.5);
}

TEST_CASE("no fired rule is an error, a perfect balance is a tie") {
    FuzzySystem sys = wide_open_system();
    CHECK_THROWS_AS(infer_and_defuzzify({0, 0, 0, 0}, sys), NumericError);

    try {
        infer_and_defuzzify({0.8, 0.8, 1.0, 1.0}, sys);
        FAIL("expected TieError");
    } catch (const TieError& tie) {
        CHECK(tie.first() == 0.8);
        CHECK(tie.second() == 0.8);
    }
}

TEST_CASE("a degenerate centroid grid is rejected") {
    FuzzySystem sys = wide_open_system();
    sys.grid = 1;
    CHECK_THROWS_AS(infer_and_defuzzify({1, 0, 1, 0}, sys), ConfigError);
}

TEST_CASE("output moves monotonically with rule strength") {
    Rng rng(72);
    for (int trial = 0; trial < 100; ++trial) {
        double sb = rng.uniform(0.05, 1.0);
        double sa1 = rng.uniform(0.05, 1.0);
        double sa2 = std::min(1.0, sa1 + rng.uniform(0.01, 0.5));
        double z1 = defuzz(sa1, sb);
        double z2 = defuzz(sa2, sb);
        CHECK(z2 <= z1 + 1e-12); // more A pull never moves z toward B
    }
}

TEST_CASE("stronger side of the rule base wins") {
    Rng rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        double sa = rng.uniform(0.05, 1.0);
        double sb = rng.uniform(0.05, 1.0);
        if (sa == sb) continue;
        double z = defuzz(sa, sb);
        CHECK(z >= 0.0);
        CHECK(z <= 1.0);
        if (sa > sb)
            CHECK(z < 0.5);
        else
            CHECK(z > 0.5);
    }
}

TEST_CASE("the default grid is close to a fine-grid centroid") {
    Rng rng(74);
    for (int trial = 0; trial < 20; ++trial) {
        double sa = rng.uniform(0.0, 1.0);
        double sb = rng.uniform(0.05, 1.0);
        double coarse = defuzz(sa, sb, 101);
        double fine = defuzz(sa, sb, 10001);
        CHECK(std::abs(coarse - fine) <= 1e-2);
    }
}

TEST_CASE("classify_fuzzy runs the whole chain on a region") {
    std::vector<std::array<double, 3>> class_a, class_b;
    Rng rng(75);
    for (int i = 0; i < 20; ++i) {
        class_a.push_back({0, rng.uniform(45, 55), rng.uniform(25, 35)});
        class_b.push_back({0, rng.uniform(145, 155), rng.uniform(195, 205)});
    }
    FuzzySystem sys = fit_memberships(class_a, class_b);

    Image img(3, 3);
    for (size_t i = 0; i < img.pixels(); ++i) {
        img.r[i] = 10;
        img.g[i] = 50;
        img.b[i] = 30;
    }
    Region r = window_region(0, 0, 3, 3, 3, 3);
    FuzzyDecision d = classify_fuzzy(r, img, sys);
    CHECK(d.label == "A");
    CHECK(d.z < 0.5);
}

} // TEST_SUITE
