#include "teamseg/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <span>

#include <json.hpp>

#include "json_util.hpp"
#include "teamseg/errors.hpp"
#include "teamseg/models_io.hpp"
#include "teamseg/svd.hpp"

namespace teamseg {

namespace fs = std::filesystem;
using nlohmann::json;
using detail::field;
using detail::field_or;
using detail::parse_json;
using detail::slurp;
using detail::spit;

RateReport evaluate(const std::vector<int>& predicted,
                    const std::vector<int>& truth, int num_classes) {
    if (predicted.size() != truth.size())
        throw ConfigError("evaluate: predicted and truth lengths differ");
    if (num_classes < 1) throw ConfigError("evaluate: need at least one class");

    RateReport rep;
    rep.total = int(predicted.size());
    rep.confusion.assign(size_t(num_classes), std::vector<int>(size_t(num_classes) + 1, 0));
    for (size_t i = 0; i < predicted.size(); ++i) {
        int t = truth[i];
        int p = predicted[i];
        if (t < 1 || t > num_classes)
            throw ConfigError("evaluate: truth label out of range");
        if (p < 0 || p > num_classes)
            throw ConfigError("evaluate: predicted label out of range");
        ++rep.confusion[size_t(t) - 1][size_t(p)];
        if (p == 0) ++rep.unclassified;
        if (p == t) ++rep.correct;
    }
    rep.percentage = rep.total > 0 ? 100.0 * rep.correct / rep.total : 0.0;
    for (int c = 1; c <= num_classes; ++c) {
        ClassRate cr;
        cr.class_id = c;
        cr.total = 0;
        for (int v : rep.confusion[size_t(c) - 1]) cr.total += v;
        cr.correct = rep.confusion[size_t(c) - 1][size_t(c)];
        cr.percentage = cr.total > 0 ? 100.0 * cr.correct / cr.total : 0.0;
        rep.per_class.push_back(cr);
    }
    return rep;
}

const char* method_name(ClassifierMethod m) {
    switch (m) {
        case ClassifierMethod::Hybrid: return "hybrid";
        case ClassifierMethod::Dmom: return "dmom";
        case ClassifierMethod::Fuzzy: return "fuzzy";
        case ClassifierMethod::Nn: return "nn";
    }
    return "hybrid";
}

ClassifierMethod parse_method(const std::string& name) {
    if (name == "hybrid") return ClassifierMethod::Hybrid;
    if (name == "dmom") return ClassifierMethod::Dmom;
    if (name == "fuzzy") return ClassifierMethod::Fuzzy;
    if (name == "nn") return ClassifierMethod::Nn;
    throw ConfigError("unknown classifier method '" + name + "'");
}

namespace {

constexpr const char* kCfg = "config";

SvdMode svd_mode_from_json(const json& j) {
    SvdMode mode;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "off") {
            mode.kind = SvdMode::Off;
        } else if (s == "auto") {
            mode.kind = SvdMode::Auto;
        } else {
            throw ConfigError("config: svd must be \"off\", \"auto\" or [r,g,b]");
        }
    } else if (j.is_array() && j.size() == 3) {
        mode.kind = SvdMode::Fixed;
        for (size_t c = 0; c < 3; ++c) {
            if (!j[c].is_number_integer())
                throw ConfigError("config: svd ranks must be integers");
            mode.ranks[c] = j[c].get<int>();
            if (mode.ranks[c] < 1)
                throw ConfigError("config: svd ranks must be >= 1");
        }
    } else {
        throw ConfigError("config: svd must be \"off\", \"auto\" or [r,g,b]");
    }
    return mode;
}

TrainWindow window_from_json(const json& j, const char* what) {
    TrainWindow w;
    w.frame = field<int>(j, "frame", what);
    w.rect = field<std::array<int, 4>>(j, "rect", what);
    w.class_id = field<int>(j, "class", what);
    return w;
}

} // namespace

PipelineConfig load_config(const std::string& json_path) {
    json j = parse_json(slurp(json_path), kCfg);
    PipelineConfig cfg;
    cfg.input_dir = field_or<std::string>(j, "input_dir", "", kCfg);
    cfg.output_dir = field_or<std::string>(j, "output_dir", "", kCfg);
    cfg.bg_frames = field_or<int>(j, "bg_frames", cfg.bg_frames, kCfg);
    if (j.contains("segmentation")) {
        const json& s = j["segmentation"];
        const char* what = "config: segmentation";
        cfg.seg.window = field_or<int>(s, "window", cfg.seg.window, what);
        cfg.seg.th = field_or<double>(s, "th", cfg.seg.th, what);
        cfg.seg.sigma_floor = field_or<double>(s, "sigma_floor", cfg.seg.sigma_floor, what);
        cfg.seg.shadow_th1 = field_or<double>(s, "shadow_th1", cfg.seg.shadow_th1, what);
        cfg.seg.shadow_th2 = field_or<double>(s, "shadow_th2", cfg.seg.shadow_th2, what);
        cfg.seg.shadow_eps_c = field_or<double>(s, "shadow_eps_c", cfg.seg.shadow_eps_c, what);
        cfg.seg.valley_frac = field_or<double>(s, "valley_frac", cfg.seg.valley_frac, what);
        cfg.seg.min_area = field_or<int>(s, "min_area", cfg.seg.min_area, what);
    }
    if (j.contains("pitch")) {
        const json& p = j["pitch"];
        const char* what = "config: pitch";
        AffineBoundary b;
        b.upper_slope = field_or<double>(p, "upper_slope", 0.0, what);
        b.upper_intercept = field<double>(p, "upper_intercept", what);
        b.lower_slope = field_or<double>(p, "lower_slope", 0.0, what);
        b.lower_intercept = field<double>(p, "lower_intercept", what);
        cfg.pitch = b;
    }
    if (j.contains("svd")) cfg.svd = svd_mode_from_json(j["svd"]);
    if (j.contains("method"))
        cfg.method = parse_method(field<std::string>(j, "method", kCfg));
    cfg.model_file = field_or<std::string>(j, "model_file", "", kCfg);
    if (j.contains("train_windows")) {
        const json& tw = j["train_windows"];
        if (!tw.is_array()) throw ConfigError("config: train_windows not an array");
        for (const json& row : tw)
            cfg.train_windows.push_back(window_from_json(row, "config: train window"));
    }
    if (j.contains("nn")) {
        const json& n = j["nn"];
        const char* what = "config: nn";
        cfg.nn_hidden = field_or<int>(n, "hidden", cfg.nn_hidden, what);
        cfg.nn_alpha = field_or<double>(n, "alpha", cfg.nn_alpha, what);
        cfg.nn_epochs = field_or<int>(n, "epochs", cfg.nn_epochs, what);
    }
    cfg.truth_labels_file = field_or<std::string>(j, "truth_labels", "", kCfg);
    cfg.seed = field_or<uint64_t>(j, "seed", cfg.seed, kCfg);

    if (cfg.bg_frames < 1) throw ConfigError("config: bg_frames must be >= 1");
    if (cfg.nn_hidden < 1) throw ConfigError("config: nn hidden size must be >= 1");
    if (cfg.nn_epochs < 1) throw ConfigError("config: nn epochs must be >= 1");
    return cfg;
}

std::vector<double> region_moment_features(const Region& region, const Image& img) {
    MomentsMatrix m = color_moments(region, img);
    std::vector<double> f;
    f.reserve(9);
    for (const auto& row : m.m)
        for (double v : row) f.push_back(v);
    return f;
}

int Classifier::num_classes() const {
    return method == ClassifierMethod::Nn ? net.outputs : 2;
}

int Classifier::classify(const Region& region, const Image& img,
                         std::vector<double>& scores) const {
    scores.clear();
    switch (method) {
        case ClassifierMethod::Hybrid: {
            HybridDecision d = classify_hybrid(region, img, space, team_a, team_b);
            scores = {d.dist_a, d.dist_b};
            return d.label == team_a.label ? 1 : 2;
        }
        case ClassifierMethod::Dmom: {
            MomentsDecision d = classify_moments(region, img, model_a, model_b, weights);
            scores = {d.dist_a, d.dist_b};
            return d.label == "A" ? 1 : 2;
        }
        case ClassifierMethod::Fuzzy: {
            FuzzyDecision d = classify_fuzzy(region, img, fuzzy);
            scores = {d.z, d.strength_a, d.strength_b};
            return d.label == "A" ? 1 : 2;
        }
        case ClassifierMethod::Nn: {
            std::vector<double> f = region_moment_features(region, img);
            if (!scaler.lo.empty()) f = scaler.apply(f);
            NnDecision d = classify_nn(net, f);
            scores = d.outputs;
            return d.class_id;
        }
    }
    throw ConfigError("unknown classifier method");
}

Classifier load_classifier(ClassifierMethod method, const std::string& model_file) {
    Classifier c;
    c.method = method;
    switch (method) {
        case ClassifierMethod::Hybrid: {
            HybridModelFile m = load_hybrid_model(model_file);
            c.space = m.space;
            c.team_a = m.team_a;
            c.team_b = m.team_b;
            break;
        }
        case ClassifierMethod::Dmom: {
            DmomModelFile m = load_dmom_model(model_file);
            c.model_a = m.model_a;
            c.model_b = m.model_b;
            c.weights = m.weights;
            break;
        }
        case ClassifierMethod::Fuzzy:
            c.fuzzy = load_fuzzy_system(model_file);
            break;
        case ClassifierMethod::Nn: {
            NnModelFile m = load_nn_model(model_file);
            c.net = m.net;
            c.scaler = m.scaler;
            break;
        }
    }
    return c;
}

namespace {

std::vector<Region> window_regions(const std::vector<TrainWindow>& windows,
                                   const std::vector<Image>& frames,
                                   std::vector<int>* frame_of, int max_class) {
    std::vector<Region> regions;
    for (const TrainWindow& w : windows) {
        if (w.frame < 0 || size_t(w.frame) >= frames.size())
            throw ConfigError("train window frame index out of range");
        if (w.class_id < 1 || w.class_id > max_class)
            throw ConfigError("train window class id out of range");
        const Image& img = frames[size_t(w.frame)];
        regions.push_back(window_region(w.rect[0], w.rect[1], w.rect[2], w.rect[3],
                                        img.width, img.height));
        if (frame_of) frame_of->push_back(w.frame);
    }
    return regions;
}

MomentsMatrix mean_moments(const std::vector<TrainWindow>& windows,
                           const std::vector<Image>& frames, int class_id) {
    MomentsMatrix acc;
    int n = 0;
    for (const TrainWindow& w : windows) {
        if (w.class_id != class_id) continue;
        Region reg = window_region(w.rect[0], w.rect[1], w.rect[2], w.rect[3],
                                   frames[size_t(w.frame)].width,
                                   frames[size_t(w.frame)].height);
        MomentsMatrix m = color_moments(reg, frames[size_t(w.frame)]);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) acc.m[i][j] += m.m[i][j];
        ++n;
    }
    if (n == 0) throw ConfigError("no training windows for one of the classes");
    for (auto& row : acc.m)
        for (double& v : row) v /= n;
    return acc;
}

} // namespace

Classifier train_classifier(const PipelineConfig& cfg,
                            const std::vector<Image>& frames) {
    if (!cfg.model_file.empty()) return load_classifier(cfg.method, cfg.model_file);
    if (cfg.train_windows.empty())
        throw ConfigError("no model file and no training windows");

    Classifier c;
    c.method = cfg.method;
    switch (cfg.method) {
        case ClassifierMethod::Hybrid: {
            int frame = cfg.train_windows.front().frame;
            for (const TrainWindow& w : cfg.train_windows)
                if (w.frame != frame)
                    throw ConfigError("hybrid training windows must share one frame");
            std::vector<int> frame_of;
            std::vector<Region> regs = window_regions(cfg.train_windows, frames, &frame_of, 2);
            std::vector<Region> a, b;
            for (size_t i = 0; i < regs.size(); ++i)
                (cfg.train_windows[i].class_id == 1 ? a : b).push_back(regs[i]);
            if (a.size() < 2 || b.empty())
                throw ConfigError("hybrid training needs two class-1 windows "
                                  "and one class-2 window");
            const Image& img = frames[size_t(frame)];
            c.space = select_hybrid_space(img, a[0], a[1], b[0]);
            c.team_a = make_team_model("A", img, a, c.space);
            c.team_b = make_team_model("B", img, b, c.space);
            break;
        }
        case ClassifierMethod::Dmom: {
            window_regions(cfg.train_windows, frames, nullptr, 2); // validate
            c.model_a = mean_moments(cfg.train_windows, frames, 1);
            c.model_b = mean_moments(cfg.train_windows, frames, 2);
            break;
        }
        case ClassifierMethod::Fuzzy: {
            std::vector<int> frame_of;
            std::vector<Region> regs = window_regions(cfg.train_windows, frames, &frame_of, 2);
            std::vector<std::array<double, 3>> fa, fb;
            for (size_t i = 0; i < regs.size(); ++i) {
                auto f = mean_rgb(regs[i], frames[size_t(frame_of[i])]);
                (cfg.train_windows[i].class_id == 1 ? fa : fb).push_back(f);
            }
            c.fuzzy = fit_memberships(fa, fb);
            break;
        }
        case ClassifierMethod::Nn: {
            std::vector<int> frame_of;
            std::vector<Region> regs = window_regions(cfg.train_windows, frames, &frame_of, 4);
            Dataset data;
            for (size_t i = 0; i < regs.size(); ++i) {
                data.x.push_back(
                    region_moment_features(regs[i], frames[size_t(frame_of[i])]));
                data.labels.push_back(cfg.train_windows[i].class_id);
            }
            c.scaler = FeatureScaler::fit(data.x);
            for (auto& row : data.x) row = c.scaler.apply(row);
            Rng init = Rng(cfg.seed).split("init");
            c.net = Mlp::random(9, cfg.nn_hidden, 4, init);
            train(c.net, data, cfg.nn_alpha, cfg.nn_epochs, cfg.seed);
            break;
        }
    }
    return c;
}

namespace {

Image maybe_refine(const Image& frame, const SvdMode& mode, std::array<int, 3>& ranks) {
    switch (mode.kind) {
        case SvdMode::Off:
            return frame;
        case SvdMode::Fixed:
            ranks = mode.ranks;
            return refine_background(frame, mode.ranks);
        case SvdMode::Auto: {
            RefineResult r = refine_background_auto(frame);
            ranks = r.ranks;
            return r.image;
        }
    }
    return frame;
}

// Majority-overlap match: the truth region covering more than half of the
// region's pixels, or 0 when none does.
int match_truth(const Region& region, std::span<const TruthRegion> truth, int frame) {
    int best_class = 0;
    int best_overlap = 0;
    for (const TruthRegion& t : truth) {
        if (t.frame != frame) continue;
        int x0 = t.rect[0], y0 = t.rect[1];
        int x1 = x0 + t.rect[2], y1 = y0 + t.rect[3];
        int overlap = 0;
        for (auto [x, y] : region.pixels)
            if (x >= x0 && x < x1 && y >= y0 && y < y1) ++overlap;
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best_class = t.class_id;
        }
    }
    if (2 * best_overlap > region.surface()) return best_class;
    return 0;
}

} // namespace

RunResult run(const PipelineConfig& cfg, const std::vector<Image>& frames,
              const std::vector<TruthRegion>* truth) {
    if (frames.empty()) throw ConfigError("run: no frames");
    if (cfg.bg_frames < 1) throw ConfigError("run: bg_frames must be >= 1");
    if (size_t(cfg.bg_frames) >= frames.size())
        throw ConfigError("run: nothing left to segment after background training");
    int width = frames[0].width, height = frames[0].height;
    for (const Image& f : frames)
        if (f.width != width || f.height != height)
            throw ConfigError("run: frames differ in size");

    RunResult result;

    // The density model and the frames it scores must see the same
    // preprocessing, so refinement applies to training frames too.
    BackgroundModel model(width, height, cfg.seg);
    for (int t = 0; t < cfg.bg_frames; ++t)
        model.update(maybe_refine(frames[size_t(t)], cfg.svd, result.svd_ranks));
    Image expected_bg = model.median_background_image();

    Classifier classifier = train_classifier(cfg, frames);

    AffineBoundary boundary =
        cfg.pitch ? *cfg.pitch : AffineBoundary::full_frame(height);

    std::vector<int> predicted, actual;
    for (size_t t = size_t(cfg.bg_frames); t < frames.size(); ++t) {
        Image frame = maybe_refine(frames[t], cfg.svd, result.svd_ranks);
        Mask candidates = delimit_pitch(frame, boundary);
        Mask mask = classify_frame(model, frame, candidates);
        mask = suppress_shadows(expected_bg, frame, mask, cfg.seg);

        FrameCounts fc;
        fc.frame = int(t);
        fc.foreground = int(mask.count(kForeground));
        fc.shadow = int(mask.count(kShadow));
        result.counts.push_back(fc);

        for (const Region& region : extract_regions(mask, cfg.seg.min_area)) {
            RegionResult rr;
            rr.frame = int(t);
            rr.bbox = {region.min_x, region.min_y, region.max_x - region.min_x + 1,
                       region.max_y - region.min_y + 1};
            rr.surface = region.surface();
            try {
                rr.class_id = classifier.classify(region, frame, rr.scores);
            } catch (const TieError& tie) {
                rr.class_id = 0;
                rr.scores = {tie.first(), tie.second()};
            } catch (const NumericError&) {
                // no-decision (e.g. no fuzzy rule covers the region): counted
                // as unclassified, like a tie
                rr.class_id = 0;
                rr.scores = {0.0, 0.0};
            }
            if (truth) {
                int label = match_truth(region, *truth, int(t));
                if (label != 0) {
                    predicted.push_back(rr.class_id);
                    actual.push_back(label);
                }
            }
            result.regions.push_back(std::move(rr));
        }
        result.masks.push_back(std::move(mask));
    }

    if (truth) {
        int k = classifier.num_classes();
        for (int label : actual) k = std::max(k, label);
        result.rates = evaluate(predicted, actual, k);
        result.has_rates = true;
    }
    return result;
}

std::string rate_report_json(const RateReport& report) {
    json j;
    j["total"] = report.total;
    j["correct"] = report.correct;
    j["percentage"] = report.percentage;
    j["unclassified"] = report.unclassified;
    json per_class = json::array();
    for (const ClassRate& cr : report.per_class)
        per_class.push_back({{"class", cr.class_id},
                             {"total", cr.total},
                             {"correct", cr.correct},
                             {"percentage", cr.percentage}});
    j["per_class"] = per_class;
    j["confusion"] = report.confusion;
    return j.dump(2) + "\n";
}

std::string report_json(const RunResult& result) {
    json j;
    json counts = json::array();
    for (const FrameCounts& fc : result.counts)
        counts.push_back({{"frame", fc.frame},
                          {"foreground", fc.foreground},
                          {"shadow", fc.shadow}});
    j["frames"] = counts;
    json regions = json::array();
    for (const RegionResult& rr : result.regions)
        regions.push_back({{"frame", rr.frame},
                           {"bbox", rr.bbox},
                           {"surface", rr.surface},
                           {"class", rr.class_id},
                           {"scores", rr.scores}});
    j["regions"] = regions;
    j["svd_ranks"] = result.svd_ranks;
    if (result.has_rates)
        j["rates"] = json::parse(rate_report_json(result.rates));
    return j.dump(2) + "\n";
}

std::vector<std::string> list_frames(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw FormatError("not a directory: " + dir);
    struct Entry {
        long number;
        std::string name;
        std::string path;
    };
    std::vector<Entry> entries;
    for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".ppm") continue;
        std::string stem = e.path().stem().string();
        // last run of digits in the stem orders the frames
        long number = -1;
        size_t end = stem.find_last_of("0123456789");
        if (end != std::string::npos) {
            size_t begin = end;
            while (begin > 0 && std::isdigit(uint8_t(stem[begin - 1]))) --begin;
            number = std::stol(stem.substr(begin, end - begin + 1));
        }
        entries.push_back({number, e.path().filename().string(), e.path().string()});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.number != b.number) return a.number < b.number;
        return a.name < b.name;
    });
    std::vector<std::string> paths;
    paths.reserve(entries.size());
    for (Entry& e : entries) paths.push_back(std::move(e.path));
    return paths;
}

RunResult run_from_dirs(const PipelineConfig& cfg) {
    if (cfg.input_dir.empty()) throw ConfigError("config: input_dir not set");
    if (cfg.output_dir.empty()) throw ConfigError("config: output_dir not set");

    std::vector<std::string> paths = list_frames(cfg.input_dir);
    if (paths.empty())
        throw FormatError("no .ppm frames in " + cfg.input_dir);
    std::vector<Image> frames;
    frames.reserve(paths.size());
    for (const std::string& p : paths) frames.push_back(load_ppm_file(p));

    std::vector<TruthRegion> truth;
    bool have_truth = !cfg.truth_labels_file.empty();
    if (have_truth) truth = load_truth_labels(cfg.truth_labels_file);

    RunResult result = run(cfg, frames, have_truth ? &truth : nullptr);

    fs::create_directories(cfg.output_dir);
    for (size_t i = 0; i < result.masks.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "mask_%05d.pgm", cfg.bg_frames + int(i));
        save_pgm_file(result.masks[i], (fs::path(cfg.output_dir) / name).string());
    }
    spit((fs::path(cfg.output_dir) / "report.json").string(), report_json(result));
    return result;
}

std::vector<TruthRegion> load_truth_labels(const std::string& path) {
    const char* what = "truth labels";
    json j = parse_json(slurp(path), what);
    auto it = j.find("regions");
    if (it == j.end() || !it->is_array())
        throw FormatError("truth labels: missing 'regions' array");
    std::vector<TruthRegion> regions;
    for (const json& row : *it) {
        TruthRegion t;
        t.frame = field<int>(row, "frame", what);
        t.rect = field<std::array<int, 4>>(row, "rect", what);
        t.class_id = field<int>(row, "class", what);
        if (t.class_id < 1) throw FormatError("truth labels: class must be >= 1");
        regions.push_back(t);
    }
    return regions;
}

void save_truth_labels(const std::vector<TruthRegion>& regions,
                       const std::string& path) {
    json rows = json::array();
    for (const TruthRegion& t : regions)
        rows.push_back({{"frame", t.frame}, {"rect", t.rect}, {"class", t.class_id}});
    json j;
    j["regions"] = rows;
    spit(path, j.dump(2) + "\n");
}

} // namespace teamseg
