#include "teamseg/models_io.hpp"

#include <json.hpp>

#include "json_util.hpp"
#include "teamseg/color.hpp"
#include "teamseg/errors.hpp"

namespace teamseg {

using nlohmann::json;
using detail::field;
using detail::parse_json;
using detail::slurp;
using detail::spit;

namespace {

json trapezoid_to_json(const Trapezoid& t) {
    return json{{"a", t.a}, {"b", t.b}, {"c", t.c}, {"d", t.d}};
}

Trapezoid trapezoid_from_json(const json& j, const char* what) {
    return {field<double>(j, "a", what), field<double>(j, "b", what),
            field<double>(j, "c", what), field<double>(j, "d", what)};
}

json team_model_to_json(const TeamModel& t) {
    return json{{"label", t.label}, {"mean", t.mean}};
}

TeamModel team_model_from_json(const json& j, const char* what) {
    TeamModel t;
    t.label = field<std::string>(j, "label", what);
    t.mean = field<std::array<double, 3>>(j, "mean", what);
    return t;
}

json moments_to_json(const MomentsMatrix& m) {
    return json{{"mean", m.m[0]}, {"stddev", m.m[1]}, {"skew", m.m[2]}};
}

MomentsMatrix moments_from_json(const json& j, const char* what) {
    MomentsMatrix m;
    m.m[0] = field<std::array<double, 3>>(j, "mean", what);
    m.m[1] = field<std::array<double, 3>>(j, "stddev", what);
    m.m[2] = field<std::array<double, 3>>(j, "skew", what);
    return m;
}

} // namespace

std::string hybrid_model_to_json(const HybridModelFile& m) {
    json j;
    j["kind"] = "hybrid";
    json levels = json::array();
    json norms = json::array();
    for (int i = 0; i < 3; ++i) {
        levels.push_back(level_name(m.space.levels[size_t(i)]));
        norms.push_back({{"lo", m.space.norms[size_t(i)].lo},
                         {"hi", m.space.norms[size_t(i)].hi}});
    }
    j["levels"] = levels;
    j["norms"] = norms;
    json ranking = json::array();
    for (const LevelScore& s : m.space.ranking)
        ranking.push_back({{"level", level_name(s.level)}, {"criterion", s.criterion}});
    j["ranking"] = ranking;
    j["team_a"] = team_model_to_json(m.team_a);
    j["team_b"] = team_model_to_json(m.team_b);
    return j.dump(2) + "\n";
}

HybridModelFile hybrid_model_from_json(const std::string& text) {
    const char* what = "hybrid model";
    json j = parse_json(text, what);
    if (field<std::string>(j, "kind", what) != "hybrid")
        throw FormatError("hybrid model: wrong kind");
    HybridModelFile m;
    auto levels = field<std::vector<std::string>>(j, "levels", what);
    if (levels.size() != 3) throw FormatError("hybrid model: need 3 levels");
    auto norms = field<json>(j, "norms", what);
    if (!norms.is_array() || norms.size() != 3)
        throw FormatError("hybrid model: need 3 norms");
    for (size_t i = 0; i < 3; ++i) {
        m.space.levels[i] = parse_level(levels[i]);
        m.space.norms[i] = {field<double>(norms[i], "lo", what),
                            field<double>(norms[i], "hi", what)};
    }
    if (auto it = j.find("ranking"); it != j.end() && it->is_array()) {
        for (const json& row : *it)
            m.space.ranking.push_back(
                {parse_level(field<std::string>(row, "level", what)),
                 field<double>(row, "criterion", what)});
    }
    m.team_a = team_model_from_json(field<json>(j, "team_a", what), what);
    m.team_b = team_model_from_json(field<json>(j, "team_b", what), what);
    return m;
}

void save_hybrid_model(const HybridModelFile& m, const std::string& path) {
    spit(path, hybrid_model_to_json(m));
}

HybridModelFile load_hybrid_model(const std::string& path) {
    return hybrid_model_from_json(slurp(path));
}

std::string dmom_model_to_json(const DmomModelFile& m) {
    json j;
    j["kind"] = "dmom";
    j["model_a"] = moments_to_json(m.model_a);
    j["model_b"] = moments_to_json(m.model_b);
    j["weights"] = m.weights.w;
    return j.dump(2) + "\n";
}

DmomModelFile dmom_model_from_json(const std::string& text) {
    const char* what = "dmom model";
    json j = parse_json(text, what);
    if (field<std::string>(j, "kind", what) != "dmom")
        throw FormatError("dmom model: wrong kind");
    DmomModelFile m;
    m.model_a = moments_from_json(field<json>(j, "model_a", what), what);
    m.model_b = moments_from_json(field<json>(j, "model_b", what), what);
    if (j.contains("weights"))
        m.weights.w = field<std::array<std::array<double, 3>, 3>>(j, "weights", what);
    return m;
}

void save_dmom_model(const DmomModelFile& m, const std::string& path) {
    spit(path, dmom_model_to_json(m));
}

DmomModelFile load_dmom_model(const std::string& path) {
    return dmom_model_from_json(slurp(path));
}

WeightMatrix load_weight_matrix(const std::string& path) {
    const char* what = "weight matrix";
    json j = parse_json(slurp(path), what);
    WeightMatrix w;
    w.w = field<std::array<std::array<double, 3>, 3>>(j, "weights", what);
    for (const auto& row : w.w)
        for (double v : row)
            if (v < 0.0) throw FormatError("weight matrix: negative weight");
    return w;
}

std::string fuzzy_system_to_json(const FuzzySystem& sys) {
    json j;
    j["kind"] = "fuzzy";
    json inputs = json::array();
    for (const FuzzyInput& in : sys.inputs)
        inputs.push_back({{"name", in.name},
                          {"team_a", trapezoid_to_json(in.team_a)},
                          {"team_b", trapezoid_to_json(in.team_b)}});
    j["inputs"] = inputs;
    j["out_a"] = {sys.out_a.left, sys.out_a.apex, sys.out_a.right};
    j["out_b"] = {sys.out_b.left, sys.out_b.apex, sys.out_b.right};
    j["grid"] = sys.grid;
    return j.dump(2) + "\n";
}

FuzzySystem fuzzy_system_from_json(const std::string& text) {
    const char* what = "fuzzy system";
    json j = parse_json(text, what);
    if (field<std::string>(j, "kind", what) != "fuzzy")
        throw FormatError("fuzzy system: wrong kind");
    FuzzySystem sys;
    sys.inputs.clear();
    auto inputs = field<json>(j, "inputs", what);
    if (!inputs.is_array()) throw FormatError("fuzzy system: inputs not an array");
    for (const json& row : inputs) {
        FuzzyInput in;
        in.name = field<std::string>(row, "name", what);
        in.team_a = trapezoid_from_json(field<json>(row, "team_a", what), what);
        in.team_b = trapezoid_from_json(field<json>(row, "team_b", what), what);
        sys.inputs.push_back(std::move(in));
    }
    auto oa = field<std::array<double, 3>>(j, "out_a", what);
    auto ob = field<std::array<double, 3>>(j, "out_b", what);
    sys.out_a = {oa[0], oa[1], oa[2]};
    sys.out_b = {ob[0], ob[1], ob[2]};
    sys.grid = field<int>(j, "grid", what);
    if (sys.grid < 2) throw FormatError("fuzzy system: grid must be >= 2");
    return sys;
}

void save_fuzzy_system(const FuzzySystem& sys, const std::string& path) {
    spit(path, fuzzy_system_to_json(sys));
}

FuzzySystem load_fuzzy_system(const std::string& path) {
    return fuzzy_system_from_json(slurp(path));
}

std::string nn_model_to_json(const NnModelFile& m) {
    json j;
    j["kind"] = "nn";
    j["inputs"] = m.net.inputs;
    j["hidden"] = m.net.hidden;
    j["outputs"] = m.net.outputs;
    j["w1"] = m.net.w1;
    j["b1"] = m.net.b1;
    j["w2"] = m.net.w2;
    j["b2"] = m.net.b2;
    j["scaler_lo"] = m.scaler.lo;
    j["scaler_hi"] = m.scaler.hi;
    j["seed"] = m.seed;
    return j.dump(2) + "\n";
}

NnModelFile nn_model_from_json(const std::string& text) {
    const char* what = "nn model";
    json j = parse_json(text, what);
    if (field<std::string>(j, "kind", what) != "nn")
        throw FormatError("nn model: wrong kind");
    NnModelFile m;
    int in = field<int>(j, "inputs", what);
    int h = field<int>(j, "hidden", what);
    int out = field<int>(j, "outputs", what);
    if (in < 1 || h < 1 || out < 1)
        throw FormatError("nn model: non-positive layer size");
    m.net = Mlp(in, h, out);
    m.net.w1 = field<std::vector<double>>(j, "w1", what);
    m.net.b1 = field<std::vector<double>>(j, "b1", what);
    m.net.w2 = field<std::vector<double>>(j, "w2", what);
    m.net.b2 = field<std::vector<double>>(j, "b2", what);
    if (m.net.w1.size() != size_t(h) * size_t(in) || m.net.b1.size() != size_t(h) ||
        m.net.w2.size() != size_t(out) * size_t(h) || m.net.b2.size() != size_t(out))
        throw FormatError("nn model: weight shapes do not match layer sizes");
    m.scaler.lo = field<std::vector<double>>(j, "scaler_lo", what);
    m.scaler.hi = field<std::vector<double>>(j, "scaler_hi", what);
    if (m.scaler.lo.size() != m.scaler.hi.size())
        throw FormatError("nn model: scaler bounds differ in length");
    m.seed = field<uint64_t>(j, "seed", what);
    return m;
}

void save_nn_model(const NnModelFile& m, const std::string& path) {
    spit(path, nn_model_to_json(m));
}

NnModelFile load_nn_model(const std::string& path) {
    return nn_model_from_json(slurp(path));
}

} // namespace teamseg
