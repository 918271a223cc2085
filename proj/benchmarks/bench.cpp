#include <benchmark/benchmark.h>

#include "teamseg/pipeline.hpp"
#include "teamseg/rng.hpp"
#include "teamseg/segmentation.hpp"
#include "teamseg/svd.hpp"
#include "teamseg/synthetic.hpp"

using namespace teamseg;

namespace {

Matrix random_matrix(int rows, int cols, uint64_t seed) {
    Rng rng(seed);
    Matrix a(rows, cols);
    for (double& v : a.data) v = rng.uniform(0.0, 255.0);
    return a;
}

void BM_SvdSquare(benchmark::State& state) {
    int n = int(state.range(0));
    Matrix a = random_matrix(n, n, 7);
    for (auto _ : state) {
        SvdFactorization f = svd(a);
        benchmark::DoNotOptimize(f.s.data());
    }
}
BENCHMARK(BM_SvdSquare)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RefineFixedRank(benchmark::State& state) {
    SyntheticSpec spec;
    spec.width = 160;
    spec.height = 120;
    spec.rect_count = 0;
    spec.frames = 1;
    Image img = gen_synthetic(spec).frames[0].image;
    for (auto _ : state) {
        Image out = refine_background(img, {10, 10, 10});
        benchmark::DoNotOptimize(out.r.data());
    }
}
BENCHMARK(BM_RefineFixedRank)->Unit(benchmark::kMillisecond);

BackgroundModel trained_model(int w, int h, int frames) {
    SyntheticSpec spec;
    spec.width = w;
    spec.height = h;
    spec.rect_count = 0;
    spec.frames = frames;
    SyntheticSequence seq = gen_synthetic(spec);
    BackgroundModel model(w, h);
    for (const SyntheticFrame& f : seq.frames) model.update(f.image);
    return model;
}

void BM_KdeFrame(benchmark::State& state) {
    int w = 80, h = 60;
    BackgroundModel model = trained_model(w, h, int(state.range(0)));
    SyntheticSpec spec;
    spec.width = w;
    spec.height = h;
    spec.frames = 1;
    spec.rect_count = 2;
    spec.rect_width = 12;
    spec.rect_height = 14; // lane height 25, two lanes fit 60 rows
    Image frame = gen_synthetic(spec).frames[0].image;
    Mask all(w, h, kForeground);
    for (auto _ : state) {
        Mask m = classify_frame(model, frame, all);
        benchmark::DoNotOptimize(m.labels.data());
    }
}
BENCHMARK(BM_KdeFrame)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

struct ClassifierFixture {
    SyntheticSequence seq;
    Classifier clf;
    Region region;

    explicit ClassifierFixture(ClassifierMethod method) {
        SyntheticSpec spec;
        spec.width = 160;
        spec.height = 120;
        spec.rect_count = 2;
        spec.rect_width = 16;
        spec.rect_height = 24;
        spec.frames = 1;
        seq = gen_synthetic(spec);

        PipelineConfig cfg;
        cfg.method = method;
        const auto& regions = seq.frames[0].regions;
        // two windows per team straddling each rectangle's halves
        for (const TruthRegion& t : regions) {
            auto [x, y, w, h] = t.rect;
            cfg.train_windows.push_back({0, {x, y, w, h / 2}, t.class_id});
            cfg.train_windows.push_back({0, {x, y + h / 2, w, h - h / 2}, t.class_id});
        }
        cfg.nn_epochs = 200;
        clf = train_classifier(cfg, {seq.frames[0].image});
        auto [x, y, w, h] = regions[0].rect;
        region = window_region(x, y, w, h, spec.width, spec.height);
    }
};

void BM_ClassifyRegion(benchmark::State& state) {
    auto method = ClassifierMethod(state.range(0));
    ClassifierFixture fix(method);
    std::vector<double> scores;
    for (auto _ : state) {
        int cls = fix.clf.classify(fix.region, fix.seq.frames[0].image, scores);
        benchmark::DoNotOptimize(cls);
    }
    state.SetLabel(method_name(method));
}
BENCHMARK(BM_ClassifyRegion)
    ->Arg(int(ClassifierMethod::Hybrid))
    ->Arg(int(ClassifierMethod::Dmom))
    ->Arg(int(ClassifierMethod::Fuzzy))
    ->Arg(int(ClassifierMethod::Nn))
    ->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
