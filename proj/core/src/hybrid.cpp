#include "teamseg/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "teamseg/errors.hpp"
#include "teamseg/log.hpp"

namespace teamseg {

double region_mean(const Region& region, const Plane& plane) {
    if (region.pixels.empty())
        throw ConfigError("region_mean: empty region");
    double sum = 0.0;
    for (auto [x, y] : region.pixels) sum += plane.at(x, y);
    return sum / double(region.pixels.size());
}

double discriminant(double mean_1a, double mean_2a, double mean_1b) {
    return std::abs(mean_1a - mean_1b) - std::abs(mean_1a - mean_2a);
}

namespace {

struct LevelStats {
    double mean_1a, mean_2a, mean_1b;
    double lo, hi;
};

LevelStats level_stats(const Image& img, ColorLevel level, const Region& j1a,
                       const Region& j2a, const Region& j1b) {
    LevelStats st{};
    st.lo = std::numeric_limits<double>::infinity();
    st.hi = -st.lo;
    const Region* regions[3] = {&j1a, &j2a, &j1b};
    double means[3];
    for (int r = 0; r < 3; ++r) {
        double sum = 0.0;
        for (auto [x, y] : regions[r]->pixels) {
            size_t i = img.index(x, y);
            double v = apply_level(level, img.r[i], img.g[i], img.b[i]);
            sum += v;
            st.lo = std::min(st.lo, v);
            st.hi = std::max(st.hi, v);
        }
        means[r] = sum / double(regions[r]->pixels.size());
    }
    st.mean_1a = means[0];
    st.mean_2a = means[1];
    st.mean_1b = means[2];
    return st;
}

} // namespace

HybridSpace select_hybrid_space(const Image& img, const Region& j1a,
                                const Region& j2a, const Region& j1b) {
    if (j1a.pixels.empty() || j2a.pixels.empty() || j1b.pixels.empty())
        throw ConfigError("select_hybrid_space: empty training window");

    std::array<LevelNorm, kColorLevelCount> norms;
    std::vector<LevelScore> scores;
    scores.reserve(kColorLevelCount);
    bool any_difference = false;

    for (ColorLevel level : kColorLevels) {
        LevelStats st = level_stats(img, level, j1a, j2a, j1b);
        LevelNorm norm{st.lo, st.hi};
        norms[int(level)] = norm;
        double m1a = norm.apply(st.mean_1a);
        double m2a = norm.apply(st.mean_2a);
        double m1b = norm.apply(st.mean_1b);
        if (st.mean_1a != st.mean_2a || st.mean_1a != st.mean_1b)
            any_difference = true;
        scores.push_back({level, discriminant(m1a, m2a, m1b)});
    }

    if (!any_difference)
        throw NumericError(
            "select_hybrid_space: training windows are identical on every level");

    // criterion descending; stable keeps declaration order on ties
    std::stable_sort(scores.begin(), scores.end(),
                     [](const LevelScore& a, const LevelScore& b) {
                         return a.criterion > b.criterion;
                     });

    if (scores.front().criterion <= 0.0)
        log::warn("select_hybrid_space: no level separates the teams "
                  "(best criterion " +
                  std::to_string(scores.front().criterion) + ")");

    HybridSpace space;
    space.ranking = scores;
    for (int i = 0; i < 3; ++i) {
        space.levels[i] = scores[i].level;
        space.norms[i] = norms[int(scores[i].level)];
    }
    return space;
}

std::array<double, 3> region_coordinates(const Region& region, const Image& img,
                                         const HybridSpace& space) {
    if (region.pixels.empty())
        throw ConfigError("region_coordinates: empty region");
    std::array<double, 3> coords{};
    for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (auto [x, y] : region.pixels) {
            size_t i = img.index(x, y);
            sum += apply_level(space.levels[c], img.r[i], img.g[i], img.b[i]);
        }
        coords[c] = space.norms[c].apply(sum / double(region.pixels.size()));
    }
    return coords;
}

TeamModel make_team_model(const std::string& label, const Image& img,
                          std::span<const Region> windows,
                          const HybridSpace& space) {
    if (windows.empty())
        throw ConfigError("make_team_model: no training windows");
    TeamModel model{label, {0.0, 0.0, 0.0}};
    for (const Region& w : windows) {
        auto c = region_coordinates(w, img, space);
        for (int i = 0; i < 3; ++i) model.mean[i] += c[i];
    }
    for (int i = 0; i < 3; ++i) model.mean[i] /= double(windows.size());
    return model;
}

HybridDecision classify_hybrid_means(const std::array<double, 3>& coords,
                                     const TeamModel& a, const TeamModel& b) {
    double da = 0.0, db = 0.0;
    for (int i = 0; i < 3; ++i) {
        double xa = coords[i] - a.mean[i];
        double xb = coords[i] - b.mean[i];
        da += xa * xa;
        db += xb * xb;
    }
    da = std::sqrt(da);
    db = std::sqrt(db);
    if (da == db) throw TieError(da, db);
    return {da < db ? a.label : b.label, da, db};
}

HybridDecision classify_hybrid(const Region& region, const Image& img,
                               const HybridSpace& space, const TeamModel& a,
                               const TeamModel& b) {
    return classify_hybrid_means(region_coordinates(region, img, space), a, b);
}

} // namespace teamseg
