// teamseg command line: segmentation, rank-reduced refinement, classifier
// training and end-to-end runs over PPM frame directories.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "teamseg/errors.hpp"
#include "teamseg/image.hpp"
#include "teamseg/models_io.hpp"
#include "teamseg/pipeline.hpp"
#include "teamseg/segmentation.hpp"
#include "teamseg/svd.hpp"
#include "teamseg/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace teamseg;

namespace {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Input: return 1;
        case ErrorKind::Config: return 2;
        case ErrorKind::Numeric: return 3;
    }
    return 3;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw FormatError("short write to " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// JSON to --output when given, stdout otherwise.
void emit_json(const std::string& output, const std::string& text) {
    if (output.empty())
        std::cout << text;
    else
        write_text(output, text);
}

SvdMode parse_svd_flag(const std::string& value) {
    SvdMode mode;
    if (value == "off") return mode;
    if (value == "auto") {
        mode.kind = SvdMode::Auto;
        return mode;
    }
    int r, g, b;
    char tail;
    if (std::sscanf(value.c_str(), "%d,%d,%d%c", &r, &g, &b, &tail) != 3 ||
        r < 1 || g < 1 || b < 1)
        throw ConfigError("--svd expects off, auto or r,g,b ranks");
    mode.kind = SvdMode::Fixed;
    mode.ranks = {r, g, b};
    return mode;
}

AffineBoundary parse_pitch(const std::vector<double>& v) {
    if (v.size() == 2) return AffineBoundary::horizontal(v[0], v[1]);
    if (v.size() == 4) return {v[0], v[1], v[2], v[3]};
    throw ConfigError("--pitch expects y_upper,y_lower or "
                      "upper_slope,upper_intercept,lower_slope,lower_intercept");
}

std::string mask_name(int frame) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "mask_%05d.pgm", frame);
    return buf;
}

std::string frame_name(int frame) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%05d.ppm", frame);
    return buf;
}

// ---------------------------------------------------------------- segment

struct SegmentArgs {
    std::string input, output;
    std::string mode = "kde";
    int bg_frames = 50;
    SegmentationParams seg;
    std::vector<double> pitch;
};

void cmd_segment(const SegmentArgs& a) {
    std::vector<std::string> paths = list_frames(a.input);
    if (paths.empty()) throw FormatError("no .ppm frames in " + a.input);
    std::vector<Image> frames;
    frames.reserve(paths.size());
    for (const std::string& p : paths) frames.push_back(load_ppm_file(p));
    fs::create_directories(a.output);

    json counts = json::array();
    auto note = [&counts](int frame, const Mask& m) {
        counts.push_back({{"frame", frame},
                          {"foreground", int(m.count(kForeground))},
                          {"shadow", int(m.count(kShadow))}});
    };

    if (a.mode == "histogram") {
        for (size_t t = 0; t < frames.size(); ++t) {
            Mask m = histogram_segment(frames[t], a.seg.valley_frac);
            save_pgm_file(m, (fs::path(a.output) / mask_name(int(t))).string());
            note(int(t), m);
        }
    } else if (a.mode == "kde") {
        if (size_t(a.bg_frames) >= frames.size())
            throw ConfigError("nothing left to segment after background training");
        int height = frames[0].height;
        BackgroundModel model(frames[0].width, height, a.seg);
        for (int t = 0; t < a.bg_frames; ++t) model.update(frames[size_t(t)]);
        Image expected_bg = model.median_background_image();
        AffineBoundary boundary = a.pitch.empty() ? AffineBoundary::full_frame(height)
                                                  : parse_pitch(a.pitch);
        for (size_t t = size_t(a.bg_frames); t < frames.size(); ++t) {
            Mask candidates = delimit_pitch(frames[t], boundary);
            Mask m = classify_frame(model, frames[t], candidates);
            m = suppress_shadows(expected_bg, frames[t], m, a.seg);
            save_pgm_file(m, (fs::path(a.output) / mask_name(int(t))).string());
            note(int(t), m);
        }
    } else {
        throw ConfigError("--mode expects kde or histogram");
    }

    json j;
    j["frames"] = counts;
    write_text((fs::path(a.output) / "report.json").string(), j.dump(2) + "\n");
    std::cout << "wrote " << counts.size() << " masks to " << a.output << "\n";
}

// -------------------------------------------------------------- svd-refine

struct RefineArgs {
    std::string input, output;
    std::string rank = "auto";
    std::string dump_energy, dump_curve;
};

void cmd_svd_refine(const RefineArgs& a) {
    Image img = load_ppm_file(a.input);
    std::array<int, 3> ranks;
    Image out;
    if (a.rank == "auto") {
        RefineResult r = refine_background_auto(img);
        out = std::move(r.image);
        ranks = r.ranks;
    } else {
        SvdMode mode = parse_svd_flag(a.rank);
        if (mode.kind != SvdMode::Fixed)
            throw ConfigError("--rank expects auto or r,g,b");
        ranks = mode.ranks;
        out = refine_background(img, ranks);
    }
    if (!a.output.empty()) save_ppm_file(out, a.output);

    static constexpr const char* kChannels[3] = {"r", "g", "b"};
    static constexpr ColorLevel kChannelLevels[3] = {ColorLevel::Red, ColorLevel::Green,
                                                     ColorLevel::Blue};
    if (!a.dump_energy.empty()) {
        std::string csv = "channel,k,s,p,cumulative\n";
        for (int c = 0; c < 3; ++c) {
            SvdFactorization f = svd(plane_matrix(to_level(img, kChannelLevels[c])));
            EnergyWeights e = energy_weights(f.s);
            double cum = 0.0;
            for (size_t k = 0; k < f.s.size(); ++k) {
                cum += e.weights[k];
                csv += std::string(kChannels[c]) + "," + std::to_string(k + 1) + "," +
                       fmt(f.s[k]) + "," + fmt(e.weights[k]) + "," + fmt(cum) + "\n";
            }
        }
        write_text(a.dump_energy, csv);
    }
    if (!a.dump_curve.empty()) {
        std::string csv = "channel,k,stddev\n";
        int k_max = std::min(img.width, img.height);
        for (int c = 0; c < 3; ++c) {
            Plane plane = to_level(img, kChannelLevels[c]);
            for (const CurvePoint& pt : stddev_curve(plane, k_max))
                csv += std::string(kChannels[c]) + "," + std::to_string(pt.k) + "," +
                       fmt(pt.stddev) + "\n";
        }
        write_text(a.dump_curve, csv);
    }
    std::cout << "ranks " << ranks[0] << "," << ranks[1] << "," << ranks[2] << "\n";
}

// ------------------------------------------------------------ select-space

struct SelectArgs {
    std::string frame, model, ranking;
    std::vector<int> j1a, j2a, j1b;
};

Region rect_region(const std::vector<int>& v, const Image& img, const char* flag) {
    if (v.size() != 4)
        throw ConfigError(std::string(flag) + " expects x,y,w,h");
    return window_region(v[0], v[1], v[2], v[3], img.width, img.height);
}

void cmd_select_space(const SelectArgs& a) {
    Image img = load_ppm_file(a.frame);
    Region j1a = rect_region(a.j1a, img, "--j1a");
    Region j2a = rect_region(a.j2a, img, "--j2a");
    Region j1b = rect_region(a.j1b, img, "--j1b");

    HybridModelFile m;
    m.space = select_hybrid_space(img, j1a, j2a, j1b);
    std::vector<Region> wa = {j1a, j2a}, wb = {j1b};
    m.team_a = make_team_model("A", img, wa, m.space);
    m.team_b = make_team_model("B", img, wb, m.space);
    if (!a.model.empty()) save_hybrid_model(m, a.model);

    std::string csv = "level,criterion\n";
    for (const LevelScore& s : m.space.ranking)
        csv += std::string(level_name(s.level)) + "," + fmt(s.criterion) + "\n";
    if (!a.ranking.empty())
        write_text(a.ranking, csv);
    else
        std::cout << csv;
    std::cout << "selected " << level_name(m.space.levels[0]) << ", "
              << level_name(m.space.levels[1]) << ", "
              << level_name(m.space.levels[2]) << "\n";
}

// ---------------------------------------------------------------- train-nn

struct TrainNnArgs {
    std::string features, model, curve;
    std::string hidden = "8";
    double alpha = 0.1;
    int epochs = kDefaultEpochCap;
    double stop = kDefaultStopError;
    uint64_t seed = 1;
};

Dataset load_features_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    Dataset data;
    std::string line;
    size_t width = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2)
            throw FormatError(path + ": need at least one feature and a label");
        char* end = nullptr;
        std::strtod(cells[0].c_str(), &end);
        bool header = end == cells[0].c_str();
        if (header) {
            if (data.x.empty()) continue; // header row
            throw FormatError(path + ": non-numeric cell past the header");
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw FormatError(path + ": ragged row");
        std::vector<double> xs;
        for (size_t i = 0; i + 1 < cells.size(); ++i)
            xs.push_back(std::stod(cells[i]));
        data.x.push_back(std::move(xs));
        data.labels.push_back(std::stoi(cells.back()));
    }
    if (data.x.empty()) throw FormatError(path + ": no samples");
    return data;
}

void cmd_train_nn(const TrainNnArgs& a) {
    Dataset data = load_features_csv(a.features);
    int inputs = int(data.x[0].size());
    int outputs = 2;
    for (int label : data.labels) {
        if (label < 1) throw ConfigError("labels must be 1-based");
        outputs = std::max(outputs, label);
    }

    FeatureScaler scaler = FeatureScaler::fit(data.x);
    for (auto& row : data.x) row = scaler.apply(row);

    int hidden;
    if (a.hidden.rfind("sweep:", 0) == 0) {
        int lo, hi;
        if (std::sscanf(a.hidden.c_str(), "sweep:%d..%d", &lo, &hi) != 2 ||
            lo < 1 || hi < lo)
            throw ConfigError("--hidden sweep expects sweep:a..b with 1 <= a <= b");
        std::vector<int> sizes;
        for (int h = lo; h <= hi; ++h) sizes.push_back(h);
        SweepResult sweep = sweep_hidden(data, sizes, a.alpha, a.epochs, a.seed,
                                         0.05, inputs, outputs);
        std::cout << "hidden,final_error\n";
        for (const SweepRow& row : sweep.table)
            std::cout << row.hidden << "," << fmt(row.final_error) << "\n";
        hidden = sweep.chosen;
        std::cout << "chosen " << hidden << "\n";
    } else {
        try {
            hidden = std::stoi(a.hidden);
        } catch (const std::exception&) {
            throw ConfigError("--hidden expects a size or sweep:a..b");
        }
        if (hidden < 1) throw ConfigError("--hidden must be >= 1");
    }

    Rng init = Rng(a.seed).split("init");
    Mlp net = Mlp::random(inputs, hidden, outputs, init);
    std::vector<TrainRecord> curve = train(net, data, a.alpha, a.epochs, a.seed, a.stop);

    NnModelFile m{net, scaler, a.seed};
    save_nn_model(m, a.model);
    if (!a.curve.empty()) {
        std::string csv = "epoch,error\n";
        for (const TrainRecord& r : curve)
            csv += std::to_string(r.epoch) + "," + fmt(r.error) + "\n";
        write_text(a.curve, csv);
    }
    std::cout << "trained " << inputs << "-" << hidden << "-" << outputs
              << " net: epochs " << curve.size() << ", final error "
              << fmt(curve.back().error) << "\n";
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
    std::string method = "hybrid";
    std::string model, weights, frame, mask, output;
    int min_area = kDefaultMinArea;
};

void cmd_classify(const ClassifyArgs& a) {
    Classifier clf = load_classifier(parse_method(a.method), a.model);
    if (!a.weights.empty()) {
        if (clf.method != ClassifierMethod::Dmom)
            throw ConfigError("--weights only applies to the dmom method");
        clf.weights = load_weight_matrix(a.weights);
    }
    Image img = load_ppm_file(a.frame);
    Mask mask = load_pgm_file(a.mask);
    if (mask.width != img.width || mask.height != img.height)
        throw ConfigError("mask and frame sizes differ");

    json rows = json::array();
    for (const Region& region : extract_regions(mask, a.min_area)) {
        std::vector<double> scores;
        int cls;
        try {
            cls = clf.classify(region, img, scores);
        } catch (const TieError& tie) {
            cls = 0; // unclassified, recorded rather than fatal
            scores = {tie.first(), tie.second()};
        }
        rows.push_back({{"bbox", std::array<int, 4>{region.min_x, region.min_y,
                                                    region.max_x - region.min_x + 1,
                                                    region.max_y - region.min_y + 1}},
                        {"surface", region.surface()},
                        {"class", cls},
                        {"scores", scores}});
    }
    json j;
    j["method"] = a.method;
    j["regions"] = rows;
    emit_json(a.output, j.dump(2) + "\n");
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
    std::string spec, output, emit_features;
};

SyntheticSpec spec_from_json(const json& j) {
    SyntheticSpec s;
    const char* what = "synthetic spec";
    auto geti = [&](const char* key, int cur) {
        return j.contains(key) ? j[key].get<int>() : cur;
    };
    s.width = geti("width", s.width);
    s.height = geti("height", s.height);
    if (j.contains("field_color"))
        s.field_color = j["field_color"].get<std::array<uint8_t, 3>>();
    if (j.contains("team_colors"))
        s.team_colors = j["team_colors"].get<std::vector<std::array<uint8_t, 3>>>();
    s.rect_count = geti("rect_count", s.rect_count);
    s.rect_width = geti("rect_width", s.rect_width);
    s.rect_height = geti("rect_height", s.rect_height);
    s.speed = geti("speed", s.speed);
    if (j.contains("shadow_strength")) s.shadow_strength = j["shadow_strength"].get<double>();
    if (j.contains("noise_sigma")) s.noise_sigma = j["noise_sigma"].get<double>();
    s.frames = geti("frames", s.frames);
    s.background_frames = geti("background_frames", s.background_frames);
    if (j.contains("seed")) s.seed = j["seed"].get<uint64_t>();
    (void)what;
    return s;
}

void cmd_synth(const SynthArgs& a) {
    SyntheticSpec spec;
    if (!a.spec.empty()) {
        json j = json::parse(read_text(a.spec), nullptr, false);
        if (j.is_discarded()) throw FormatError(a.spec + ": invalid JSON");
        spec = spec_from_json(j);
    }
    SyntheticSequence seq = gen_synthetic(spec);

    fs::path out(a.output);
    fs::create_directories(out / "frames");
    fs::create_directories(out / "truth");
    std::vector<TruthRegion> labels;
    for (size_t t = 0; t < seq.frames.size(); ++t) {
        save_ppm_file(seq.frames[t].image, (out / "frames" / frame_name(int(t))).string());
        save_pgm_file(seq.frames[t].truth, (out / "truth" / mask_name(int(t))).string());
        labels.insert(labels.end(), seq.frames[t].regions.begin(),
                      seq.frames[t].regions.end());
    }
    save_truth_labels(labels, (out / "labels.json").string());

    if (!a.emit_features.empty()) {
        std::string csv =
            "mean_h,mean_s,mean_v,std_h,std_s,std_v,skew_h,skew_s,skew_v,label\n";
        for (const TruthRegion& t : labels) {
            const Image& img = seq.frames[size_t(t.frame)].image;
            Region region = window_region(t.rect[0], t.rect[1], t.rect[2], t.rect[3],
                                          img.width, img.height);
            for (double v : region_moment_features(region, img)) csv += fmt(v) + ",";
            csv += std::to_string(t.class_id) + "\n";
        }
        write_text(a.emit_features, csv);
    }
    std::cout << "wrote " << seq.frames.size() << " frames, " << labels.size()
              << " truth regions to " << a.output << "\n";
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
    std::string pred, truth, output;
    int classes = 0; // 0 -> max label seen
};

std::vector<int> load_labels(const std::string& path) {
    json j = json::parse(read_text(path), nullptr, false);
    if (j.is_discarded()) throw FormatError(path + ": invalid JSON");
    auto it = j.find("labels");
    if (it == j.end() || !it->is_array())
        throw FormatError(path + ": missing 'labels' array");
    return it->get<std::vector<int>>();
}

void cmd_eval(const EvalArgs& a) {
    std::vector<int> pred = load_labels(a.pred);
    std::vector<int> truth = load_labels(a.truth);
    int k = a.classes;
    if (k == 0) {
        for (int v : pred) k = std::max(k, v);
        for (int v : truth) k = std::max(k, v);
    }
    RateReport rep = evaluate(pred, truth, k);
    emit_json(a.output, rate_report_json(rep));
}

// --------------------------------------------------------------------- run

struct RunArgs {
    std::string config;
    std::string input, output, method, svd, model;
    int bg_frames = -1;
    int64_t seed = -1;
};

void cmd_run(const RunArgs& a) {
    PipelineConfig cfg = load_config(a.config);
    if (!a.input.empty()) cfg.input_dir = a.input;
    if (!a.output.empty()) cfg.output_dir = a.output;
    if (!a.method.empty()) cfg.method = parse_method(a.method);
    if (!a.svd.empty()) cfg.svd = parse_svd_flag(a.svd);
    if (!a.model.empty()) cfg.model_file = a.model;
    if (a.bg_frames >= 0) cfg.bg_frames = a.bg_frames;
    if (a.seed >= 0) cfg.seed = uint64_t(a.seed);

    RunResult result = run_from_dirs(cfg);
    std::cout << "frames " << result.counts.size() << ", regions "
              << result.regions.size();
    if (result.has_rates)
        std::cout << ", overall " << fmt(result.rates.percentage) << "%";
    std::cout << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"KDE background subtraction and team classification over "
                 "PPM frame sequences"};
    app.require_subcommand(1);

    SegmentArgs seg_args;
    CLI::App* seg = app.add_subcommand("segment", "Segment a frame directory");
    seg->add_option("--input", seg_args.input, "directory of numbered .ppm frames")
        ->required();
    seg->add_option("--output", seg_args.output, "mask output directory")->required();
    seg->add_option("--mode", seg_args.mode, "kde or histogram");
    seg->add_option("--bg-frames", seg_args.bg_frames, "training frames (kde mode)");
    seg->add_option("--window", seg_args.seg.window, "history window size");
    seg->add_option("--th", seg_args.seg.th, "density threshold");
    seg->add_option("--sigma-floor", seg_args.seg.sigma_floor, "bandwidth floor");
    seg->add_option("--th1", seg_args.seg.shadow_th1, "shadow ratio lower bound");
    seg->add_option("--th2", seg_args.seg.shadow_th2, "shadow ratio upper bound");
    seg->add_option("--eps-c", seg_args.seg.shadow_eps_c, "shadow chromaticity gate");
    seg->add_option("--valley", seg_args.seg.valley_frac, "histogram valley fraction");
    seg->add_option("--min-area", seg_args.seg.min_area, "region area floor");
    seg->add_option("--pitch", seg_args.pitch,
                    "pitch boundary: y_upper,y_lower or two slope,intercept pairs")
        ->delimiter(',');
    seg->callback([&] { cmd_segment(seg_args); });

    RefineArgs ref_args;
    CLI::App* ref = app.add_subcommand("svd-refine",
                                       "Rank-reduced reconstruction of one frame");
    ref->add_option("--input", ref_args.input, "input .ppm")->required();
    ref->add_option("--output", ref_args.output, "output .ppm");
    ref->add_option("--rank", ref_args.rank, "auto or r,g,b per-channel ranks");
    ref->add_option("--dump-energy", ref_args.dump_energy,
                    "CSV of singular values and energy shares");
    ref->add_option("--dump-curve", ref_args.dump_curve,
                    "CSV of reconstruction std-dev vs rank");
    ref->callback([&] { cmd_svd_refine(ref_args); });

    SelectArgs sel_args;
    CLI::App* sel = app.add_subcommand("select-space",
                                       "Pick the three most discriminant color levels");
    sel->add_option("--frame", sel_args.frame, "training frame .ppm")->required();
    sel->add_option("--j1a", sel_args.j1a, "first team-A window x,y,w,h")
        ->required()->delimiter(',');
    sel->add_option("--j2a", sel_args.j2a, "second team-A window x,y,w,h")
        ->required()->delimiter(',');
    sel->add_option("--j1b", sel_args.j1b, "team-B window x,y,w,h")
        ->required()->delimiter(',');
    sel->add_option("--model", sel_args.model, "write hybrid model JSON here");
    sel->add_option("--ranking", sel_args.ranking, "write level ranking CSV here");
    sel->callback([&] { cmd_select_space(sel_args); });

    TrainNnArgs nn_args;
    CLI::App* nn = app.add_subcommand("train-nn", "Train the perceptron classifier");
    nn->add_option("--features", nn_args.features, "CSV of feature rows plus label")
        ->required();
    nn->add_option("--model", nn_args.model, "output model JSON")->required();
    nn->add_option("--hidden", nn_args.hidden, "hidden size or sweep:a..b");
    nn->add_option("--alpha", nn_args.alpha, "learning rate");
    nn->add_option("--epochs", nn_args.epochs, "epoch cap");
    nn->add_option("--stop", nn_args.stop, "early-stop epoch error");
    nn->add_option("--seed", nn_args.seed, "init/shuffle seed");
    nn->add_option("--curve", nn_args.curve, "write epoch,error CSV here");
    nn->callback([&] { cmd_train_nn(nn_args); });

    ClassifyArgs cls_args;
    CLI::App* cls = app.add_subcommand("classify",
                                       "Classify mask regions of one frame");
    cls->add_option("--method", cls_args.method, "hybrid, dmom, fuzzy or nn");
    cls->add_option("--model,--models", cls_args.model, "model JSON")->required();
    cls->add_option("--weights", cls_args.weights, "dmom weight matrix JSON");
    cls->add_option("--frame", cls_args.frame, "frame .ppm")->required();
    cls->add_option("--mask", cls_args.mask, "segmentation mask .pgm")->required();
    cls->add_option("--min-area", cls_args.min_area, "region area floor");
    cls->add_option("--output", cls_args.output, "report JSON (stdout if omitted)");
    cls->callback([&] { cmd_classify(cls_args); });

    SynthArgs syn_args;
    CLI::App* syn = app.add_subcommand("synth",
                                       "Generate a synthetic sequence with ground truth");
    syn->add_option("--spec", syn_args.spec, "spec JSON (defaults if omitted)");
    syn->add_option("--output", syn_args.output, "output directory")->required();
    syn->add_option("--emit-features", syn_args.emit_features,
                    "write truth-window feature CSV here");
    syn->callback([&] { cmd_synth(syn_args); });

    EvalArgs eval_args;
    CLI::App* ev = app.add_subcommand("eval", "Rate predicted labels against truth");
    ev->add_option("--pred", eval_args.pred, "predictions JSON {\"labels\":[...]}")
        ->required();
    ev->add_option("--truth", eval_args.truth, "truth JSON {\"labels\":[...]}")
        ->required();
    ev->add_option("--classes", eval_args.classes, "class count (max label if omitted)");
    ev->add_option("--output", eval_args.output, "report JSON (stdout if omitted)");
    ev->callback([&] { cmd_eval(eval_args); });

    RunArgs run_args;
    CLI::App* rn = app.add_subcommand("run", "Full segmentation and classification run");
    rn->add_option("--config", run_args.config, "pipeline config JSON")->required();
    rn->add_option("--input", run_args.input, "override input_dir");
    rn->add_option("--output", run_args.output, "override output_dir");
    rn->add_option("--method", run_args.method, "override classifier method");
    rn->add_option("--svd", run_args.svd, "override svd mode: off, auto or r,g,b");
    rn->add_option("--model", run_args.model, "override model file");
    rn->add_option("--bg-frames", run_args.bg_frames, "override training frame count");
    rn->add_option("--seed", run_args.seed, "override seed");
    rn->callback([&] { cmd_run(run_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
