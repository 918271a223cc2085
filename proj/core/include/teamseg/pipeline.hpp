#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teamseg/fuzzy.hpp"
#include "teamseg/hybrid.hpp"
#include "teamseg/image.hpp"
#include "teamseg/mlp.hpp"
#include "teamseg/moments.hpp"
#include "teamseg/segmentation.hpp"
#include "teamseg/synthetic.hpp"

namespace teamseg {

struct ClassRate {
    int class_id;
    int total;
    int correct;
    double percentage;
};

struct RateReport {
    int total = 0;
    int correct = 0;
    double percentage = 0.0;
    int unclassified = 0;
    std::vector<ClassRate> per_class;
    // confusion[t][p]: rows are truth classes 1..K, column 0 is
    // "unclassified", columns 1..K are predicted classes.
    std::vector<std::vector<int>> confusion;
};

// Classification rates from parallel label lists (0 = unclassified
// prediction). Lists must have equal length; truth labels must be 1..K.
RateReport evaluate(const std::vector<int>& predicted,
                    const std::vector<int>& truth, int num_classes);

enum class ClassifierMethod { Hybrid, Dmom, Fuzzy, Nn };

const char* method_name(ClassifierMethod m);
ClassifierMethod parse_method(const std::string& name);

struct SvdMode {
    enum Kind { Off, Auto, Fixed } kind = Off;
    std::array<int, 3> ranks{1, 1, 1};
};

// A labeled training window: rectangle on one input frame.
struct TrainWindow {
    int frame;
    std::array<int, 4> rect;
    int class_id;
};

struct PipelineConfig {
    std::string input_dir;
    std::string output_dir;
    int bg_frames = 50;
    SegmentationParams seg;
    std::optional<AffineBoundary> pitch;
    SvdMode svd;
    ClassifierMethod method = ClassifierMethod::Hybrid;
    std::string model_file;                 // pre-trained model, or:
    std::vector<TrainWindow> train_windows; // train from these windows
    int nn_hidden = 8;
    double nn_alpha = 0.1;
    int nn_epochs = 2000;
    std::string truth_labels_file;
    uint64_t seed = 1;
};

PipelineConfig load_config(const std::string& json_path);

// Bundled trained classifier; exactly one member is active per method.
struct Classifier {
    ClassifierMethod method = ClassifierMethod::Hybrid;
    HybridSpace space;
    TeamModel team_a, team_b;
    MomentsMatrix model_a, model_b;
    WeightMatrix weights = WeightMatrix::defaults();
    FuzzySystem fuzzy;
    Mlp net;
    FeatureScaler scaler;

    int num_classes() const;
    // 1-based class, throws TieError on exact ties; scores get the
    // method-specific decision values (distances, z, or outputs).
    int classify(const Region& region, const Image& img,
                 std::vector<double>& scores) const;
};

Classifier train_classifier(const PipelineConfig& cfg,
                            const std::vector<Image>& frames);

// Loads a serialized model of the given method into a ready classifier.
Classifier load_classifier(ClassifierMethod method, const std::string& model_file);

// The nine features the NN method trains on: the color-moments matrix
// flattened row-major (means, std-devs, skews; H, S, V within each row).
std::vector<double> region_moment_features(const Region& region, const Image& img);

struct RegionResult {
    int frame; // index into the input sequence
    std::array<int, 4> bbox;
    int surface;
    int class_id; // 0 if unclassified (tie)
    std::vector<double> scores;
};

struct FrameCounts {
    int frame;
    int foreground;
    int shadow;
};

struct RunResult {
    std::vector<Mask> masks; // one per classified frame
    std::vector<FrameCounts> counts;
    std::vector<RegionResult> regions;
    std::array<int, 3> svd_ranks{0, 0, 0}; // last auto/fixed ranks, if any
    RateReport rates;
    bool has_rates = false;
};

// Full chain on an in-memory sequence: train the background model on the
// first bg_frames frames, freeze it, then per frame delimit, optionally
// refine, classify against the model, suppress shadows, extract regions and
// classify them. If truth regions are given, regions are matched to them by
// majority pixel overlap and rates are filled in.
RunResult run(const PipelineConfig& cfg, const std::vector<Image>& frames,
              const std::vector<TruthRegion>* truth = nullptr);

// Directory-based wrapper: loads numbered PPM frames from input_dir, runs,
// writes per-frame masks and report.json under output_dir.
RunResult run_from_dirs(const PipelineConfig& cfg);

std::string report_json(const RunResult& result);
std::string rate_report_json(const RateReport& report);

// Sorted numeric listing of the .ppm frames in a directory.
std::vector<std::string> list_frames(const std::string& dir);

std::vector<TruthRegion> load_truth_labels(const std::string& path);
void save_truth_labels(const std::vector<TruthRegion>& regions,
                       const std::string& path);

} // namespace teamseg
