#include "doctest.h"

#include <fstream>
#include <string>

#include "oracles.hpp"
#include "teamseg/errors.hpp"
#include "teamseg/models_io.hpp"

using namespace teamseg;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

HybridModelFile sample_hybrid() {
    HybridModelFile m;
    m.space.levels = {ColorLevel::ChromU, ColorLevel::Tint, ColorLevel::Ohta2};
    m.space.norms = {LevelNorm{-62.7, 125.4}, LevelNorm{0.0, 1.0}, LevelNorm{-127.5, 127.5}};
    m.space.ranking = {{ColorLevel::ChromU, 0.83}, {ColorLevel::Tint, 0.41}};
    m.team_a = {"A", {0.12, 0.5, 0.9}};
    m.team_b = {"B", {0.8, 0.25, 0.1}};
    return m;
}

DmomModelFile sample_dmom() {
    DmomModelFile m;
    m.model_a.m = {{{0.41, 0.36, 0.35}, {0.22, 0.16, 0.19}, {-1.25, -1.19, -1.19}}};
    m.model_b.m = {{{0.76, 0.70, 0.74}, {0.10, 0.08, 0.10}, {-0.01, -0.01, -0.01}}};
    m.weights.w = {{{1, 3, 1}, {0.5, 2, 0.5}, {1, 1, 1}}};
    return m;
}

FuzzySystem sample_fuzzy() {
    FuzzySystem sys;
    sys.inputs.resize(2);
    sys.inputs[0].name = "green_moy";
    sys.inputs[0].team_a = {10.5, 12.5, 17.5, 19.5};
    sys.inputs[0].team_b = {60.0, 70.0, 80.0, 90.0};
    sys.inputs[1].name = "blue_moy";
    sys.inputs[1].team_a = {5.0, 6.0, 7.0, 8.0};
    sys.inputs[1].team_b = {100.0, 110.0, 120.0, 130.0};
    return sys;
}

NnModelFile sample_nn() {
    NnModelFile m;
    Rng rng = Rng(123).split("init");
    m.net = Mlp::random(3, 2, 2, rng);
    m.scaler.lo = {0.0, -1.0, 2.5};
    m.scaler.hi = {1.0, 1.0, 2.5};
    m.seed = 77;
    return m;
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    size_t pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

} // namespace

TEST_SUITE("models_io") {

TEST_CASE("hybrid model round trips and serializes deterministically") {
    HybridModelFile m = sample_hybrid();
    std::string text = hybrid_model_to_json(m);
    CHECK(hybrid_model_to_json(m) == text);

    HybridModelFile back = hybrid_model_from_json(text);
    CHECK(back.space.levels == m.space.levels);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.space.norms[size_t(i)].lo == m.space.norms[size_t(i)].lo);
        CHECK(back.space.norms[size_t(i)].hi == m.space.norms[size_t(i)].hi);
    }
    REQUIRE(back.space.ranking.size() == m.space.ranking.size());
    for (size_t i = 0; i < m.space.ranking.size(); ++i) {
        CHECK(back.space.ranking[i].level == m.space.ranking[i].level);
        CHECK(back.space.ranking[i].criterion == m.space.ranking[i].criterion);
    }
    CHECK(back.team_a.label == m.team_a.label);
    CHECK(back.team_a.mean == m.team_a.mean);
    CHECK(back.team_b.label == m.team_b.label);
    CHECK(back.team_b.mean == m.team_b.mean);

    CHECK(hybrid_model_to_json(back) == text);
}

TEST_CASE("dmom model round trips; omitted weights fall back to the defaults") {
    DmomModelFile m = sample_dmom();
    std::string text = dmom_model_to_json(m);
    DmomModelFile back = dmom_model_from_json(text);
    CHECK(back.model_a.m == m.model_a.m);
    CHECK(back.model_b.m == m.model_b.m);
    CHECK(back.weights.w == m.weights.w);
    CHECK(dmom_model_to_json(back) == text);

    std::string no_weights = R"({
        "kind": "dmom",
        "model_a": {"mean": [1,2,3], "stddev": [4,5,6], "skew": [7,8,9]},
        "model_b": {"mean": [0,0,0], "stddev": [0,0,0], "skew": [0,0,0]}
    })";
    DmomModelFile plain = dmom_model_from_json(no_weights);
    CHECK(plain.weights.w == WeightMatrix::defaults().w);
    CHECK(plain.model_a.mean(2) == 3.0);
    CHECK(plain.model_a.skew(0) == 7.0);
}

TEST_CASE("fuzzy system round trips") {
    FuzzySystem sys = sample_fuzzy();
    std::string text = fuzzy_system_to_json(sys);
    FuzzySystem back = fuzzy_system_from_json(text);
    REQUIRE(back.inputs.size() == sys.inputs.size());
    for (size_t i = 0; i < sys.inputs.size(); ++i) {
        CHECK(back.inputs[i].name == sys.inputs[i].name);
        CHECK(back.inputs[i].team_a.a == sys.inputs[i].team_a.a);
        CHECK(back.inputs[i].team_a.d == sys.inputs[i].team_a.d);
        CHECK(back.inputs[i].team_b.b == sys.inputs[i].team_b.b);
        CHECK(back.inputs[i].team_b.c == sys.inputs[i].team_b.c);
    }
    CHECK(back.out_a.apex == sys.out_a.apex);
    CHECK(back.out_b.apex == sys.out_b.apex);
    CHECK(back.grid == sys.grid);
    CHECK(fuzzy_system_to_json(back) == text);

    std::string bad_grid = replace_once(text, "\"grid\": 101", "\"grid\": 1");
    CHECK_THROWS_AS(fuzzy_system_from_json(bad_grid), FormatError);
}

TEST_CASE("nn model round trips bit-exactly") {
    NnModelFile m = sample_nn();
    std::string text = nn_model_to_json(m);
    NnModelFile back = nn_model_from_json(text);
    CHECK(back.net.inputs == m.net.inputs);
    CHECK(back.net.hidden == m.net.hidden);
    CHECK(back.net.outputs == m.net.outputs);
    CHECK(back.net.w1 == m.net.w1);
    CHECK(back.net.b1 == m.net.b1);
    CHECK(back.net.w2 == m.net.w2);
    CHECK(back.net.b2 == m.net.b2);
    CHECK(back.scaler.lo == m.scaler.lo);
    CHECK(back.scaler.hi == m.scaler.hi);
    CHECK(back.seed == m.seed);
    CHECK(nn_model_to_json(back) == text);
}

TEST_CASE("loaders reject foreign kinds, bad JSON, and missing fields") {
    std::string hybrid_text = hybrid_model_to_json(sample_hybrid());
    std::string dmom_text = dmom_model_to_json(sample_dmom());

    CHECK_THROWS_WITH_AS(dmom_model_from_json(hybrid_text),
                         doctest::Contains("wrong kind"), FormatError);
    CHECK_THROWS_AS(hybrid_model_from_json(dmom_text), FormatError);
    CHECK_THROWS_AS(fuzzy_system_from_json(hybrid_text), FormatError);
    CHECK_THROWS_AS(nn_model_from_json(dmom_text), FormatError);

    CHECK_THROWS_WITH_AS(hybrid_model_from_json("{nope"),
                         doctest::Contains("invalid JSON"), FormatError);

    CHECK_THROWS_WITH_AS(
        dmom_model_from_json(R"({"kind": "dmom", "model_a": {"mean": [1,2,3]}})"),
        doctest::Contains("missing field"), FormatError);

    std::string two_levels = replace_once(hybrid_text, "\"u\",", "");
    CHECK_THROWS_WITH_AS(hybrid_model_from_json(two_levels),
                         doctest::Contains("need 3 levels"), FormatError);
}

TEST_CASE("nn loader validates shapes and scaler bounds") {
    std::string text = nn_model_to_json(sample_nn());

    std::string wrong_hidden = replace_once(text, "\"hidden\": 2", "\"hidden\": 3");
    CHECK_THROWS_WITH_AS(nn_model_from_json(wrong_hidden),
                         doctest::Contains("weight shapes"), FormatError);

    std::string zero_inputs = replace_once(text, "\"inputs\": 3", "\"inputs\": 0");
    CHECK_THROWS_WITH_AS(nn_model_from_json(zero_inputs),
                         doctest::Contains("layer size"), FormatError);

    std::string short_lo = replace_once(text, "\"scaler_lo\": [\n    0.0,", "\"scaler_lo\": [");
    CHECK_THROWS_WITH_AS(nn_model_from_json(short_lo),
                         doctest::Contains("scaler bounds"), FormatError);
}

TEST_CASE("file variants round trip through disk") {
    oracle::TempDir dir;

    HybridModelFile hm = sample_hybrid();
    save_hybrid_model(hm, dir.file("hybrid.json"));
    CHECK(load_hybrid_model(dir.file("hybrid.json")).team_b.mean == hm.team_b.mean);

    DmomModelFile dm = sample_dmom();
    save_dmom_model(dm, dir.file("dmom.json"));
    CHECK(load_dmom_model(dir.file("dmom.json")).weights.w == dm.weights.w);

    FuzzySystem fs = sample_fuzzy();
    save_fuzzy_system(fs, dir.file("fuzzy.json"));
    CHECK(load_fuzzy_system(dir.file("fuzzy.json")).inputs[0].team_a.b ==
          fs.inputs[0].team_a.b);

    NnModelFile nm = sample_nn();
    save_nn_model(nm, dir.file("nn.json"));
    CHECK(load_nn_model(dir.file("nn.json")).net.w1 == nm.net.w1);

    CHECK_THROWS_WITH_AS(load_hybrid_model(dir.file("absent.json")),
                         doctest::Contains("absent.json"), FormatError);
}

TEST_CASE("weight matrix files are validated") {
    oracle::TempDir dir;
    write_file(dir.file("w.json"),
               R"({"weights": [[1, 2, 1], [1, 2, 1], [0.5, 1, 0.5]]})");
    WeightMatrix w = load_weight_matrix(dir.file("w.json"));
    CHECK(w.w[0][1] == 2.0);
    CHECK(w.w[2][0] == 0.5);

    write_file(dir.file("neg.json"),
               R"({"weights": [[1, 2, 1], [1, -2, 1], [1, 2, 1]]})");
    CHECK_THROWS_WITH_AS(load_weight_matrix(dir.file("neg.json")),
                         doctest::Contains("negative"), FormatError);

    write_file(dir.file("short.json"), R"({"weights": [[1, 2, 1]]})");
    CHECK_THROWS_AS(load_weight_matrix(dir.file("short.json")), FormatError);
}

} // TEST_SUITE
