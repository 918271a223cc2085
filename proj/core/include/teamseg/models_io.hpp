#pragma once

#include <string>

#include "teamseg/fuzzy.hpp"
#include "teamseg/hybrid.hpp"
#include "teamseg/mlp.hpp"
#include "teamseg/moments.hpp"

namespace teamseg {

// JSON persistence for trained models. The *_json functions work on strings;
// the *_file variants read/write files. Serialized output is deterministic.

struct HybridModelFile {
    HybridSpace space;
    TeamModel team_a;
    TeamModel team_b;
};

std::string hybrid_model_to_json(const HybridModelFile& m);
HybridModelFile hybrid_model_from_json(const std::string& text);
void save_hybrid_model(const HybridModelFile& m, const std::string& path);
HybridModelFile load_hybrid_model(const std::string& path);

struct DmomModelFile {
    MomentsMatrix model_a;
    MomentsMatrix model_b;
    WeightMatrix weights = WeightMatrix::defaults();
};

std::string dmom_model_to_json(const DmomModelFile& m);
DmomModelFile dmom_model_from_json(const std::string& text);
void save_dmom_model(const DmomModelFile& m, const std::string& path);
DmomModelFile load_dmom_model(const std::string& path);

WeightMatrix load_weight_matrix(const std::string& path);

std::string fuzzy_system_to_json(const FuzzySystem& sys);
FuzzySystem fuzzy_system_from_json(const std::string& text);
void save_fuzzy_system(const FuzzySystem& sys, const std::string& path);
FuzzySystem load_fuzzy_system(const std::string& path);

struct NnModelFile {
    Mlp net;
    FeatureScaler scaler;
    uint64_t seed = 0;
};

std::string nn_model_to_json(const NnModelFile& m);
NnModelFile nn_model_from_json(const std::string& text);
void save_nn_model(const NnModelFile& m, const std::string& path);
NnModelFile load_nn_model(const std::string& path);

} // namespace teamseg
