#include "teamseg/fuzzy.hpp"

#include <algorithm>
#include <cmath>

#include "teamseg/errors.hpp"
#include "teamseg/log.hpp"

namespace teamseg {

double Trapezoid::membership(double x) const {
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a); // a < b here, or the branch is dead
    return (d - x) / (d - c);
}

double Triangle::membership(double x) const {
    if (x <= left || x >= right) return 0.0;
    if (x == apex) return 1.0;
    if (x < apex) return (x - left) / (apex - left);
    return (right - x) / (right - apex);
}

std::array<double, 3> mean_rgb(const Region& region, const Image& img) {
    if (region.pixels.empty()) throw ConfigError("mean_rgb: empty region");
    double sum[3] = {0, 0, 0};
    for (auto [x, y] : region.pixels) {
        size_t i = img.index(x, y);
        sum[0] += img.r[i];
        sum[1] += img.g[i];
        sum[2] += img.b[i];
    }
    double n = double(region.pixels.size());
    return {sum[0] / n, sum[1] / n, sum[2] / n};
}

namespace {

// Linear-interpolation percentile on sorted data, q in [0, 1].
double percentile(const std::vector<double>& sorted, double q) {
    double pos = q * double(sorted.size() - 1);
    size_t i = size_t(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    double frac = pos - double(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

Trapezoid fit_trapezoid(std::vector<double> samples, const char* what) {
    std::sort(samples.begin(), samples.end());
    Trapezoid t{percentile(samples, 0.05), percentile(samples, 0.25),
                percentile(samples, 0.75), percentile(samples, 0.95)};
    if (t.a == t.d)
        log::warn(std::string("fit_memberships: ") + what +
                  " samples are identical, membership collapses to a spike");
    return t;
}

} // namespace

FuzzySystem fit_memberships(std::span<const std::array<double, 3>> class_a,
                            std::span<const std::array<double, 3>> class_b) {
    if (class_a.size() < 2 || class_b.size() < 2)
        throw ConfigError("fit_memberships: need at least 2 samples per class");

    auto column = [](std::span<const std::array<double, 3>> rows, int c) {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) v.push_back(r[c]);
        return v;
    };

    FuzzySystem sys;
    sys.inputs = {
        {"green_moy", fit_trapezoid(column(class_a, 1), "class-A green"),
         fit_trapezoid(column(class_b, 1), "class-B green")},
        {"blue_moy", fit_trapezoid(column(class_a, 2), "class-A blue"),
         fit_trapezoid(column(class_b, 2), "class-B blue")},
    };
    return sys;
}

Memberships fuzzify(const std::array<double, 3>& features, const FuzzySystem& sys) {
    if (sys.inputs.size() != 2)
        throw ConfigError("fuzzify: system has no fitted inputs");
    double green = features[1], blue = features[2];
    return {sys.inputs[0].team_a.membership(green),
            sys.inputs[0].team_b.membership(green),
            sys.inputs[1].team_a.membership(blue),
            sys.inputs[1].team_b.membership(blue)};
}

FuzzyDecision infer_and_defuzzify(const Memberships& mem, const FuzzySystem& sys) {
    double sa = std::min(mem.green_a, mem.blue_a);
    double sb = std::min(mem.green_b, mem.blue_b);
    if (sa <= 0.0 && sb <= 0.0)
        throw NumericError("fuzzy inference: no rule fires");

    if (sys.grid < 2) throw ConfigError("fuzzy inference: grid too small");
    double num = 0.0, den = 0.0;
    for (int i = 0; i < sys.grid; ++i) {
        double z = double(i) / double(sys.grid - 1);
        double mu = std::max(std::min(sa, sys.out_a.membership(z)),
                             std::min(sb, sys.out_b.membership(z)));
        num += mu * z;
        den += mu;
    }
    double z = num / den;
    if (std::abs(z - 0.5) <= 1e-12) throw TieError(sa, sb);
    return {z < 0.5 ? "A" : "B", z, sa, sb};
}

FuzzyDecision classify_fuzzy(const Region& region, const Image& img,
                             const FuzzySystem& sys) {
    return infer_and_defuzzify(fuzzify(mean_rgb(region, img), sys), sys);
}

} // namespace teamseg
