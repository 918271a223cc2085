#include "teamseg/moments.hpp"

#include <cmath>

#include "teamseg/color.hpp"
#include "teamseg/errors.hpp"

namespace teamseg {

MomentsMatrix color_moments(const Region& region, const Image& img) {
    if (region.pixels.empty())
        throw ConfigError("color_moments: empty region");
    const double n = double(region.pixels.size());

    // two-pass: means first, then central moments
    double mean[3] = {0, 0, 0};
    std::vector<Hsv> vals;
    vals.reserve(region.pixels.size());
    for (auto [x, y] : region.pixels) {
        size_t i = img.index(x, y);
        Hsv hsv = rgb_to_hsv(img.r[i], img.g[i], img.b[i]);
        vals.push_back(hsv);
        mean[0] += hsv.h;
        mean[1] += hsv.s;
        mean[2] += hsv.v;
    }
    for (double& m : mean) m /= n;

    double m2[3] = {0, 0, 0}, m3[3] = {0, 0, 0};
    for (const Hsv& hsv : vals) {
        const double ch[3] = {hsv.h, hsv.s, hsv.v};
        for (int c = 0; c < 3; ++c) {
            double d = ch[c] - mean[c];
            m2[c] += d * d;
            m3[c] += d * d * d;
        }
    }

    MomentsMatrix out;
    for (int c = 0; c < 3; ++c) {
        out.m[0][c] = mean[c];
        out.m[1][c] = std::sqrt(m2[c] / n);
        out.m[2][c] = std::cbrt(m3[c] / n);
    }
    return out;
}

double dmom(const MomentsMatrix& a, const MomentsMatrix& b, const WeightMatrix& w) {
    double d = 0.0;
    for (int c = 0; c < 3; ++c) {
        if (w.w[c][0] < 0.0 || w.w[c][1] < 0.0 || w.w[c][2] < 0.0)
            throw ConfigError("dmom: negative weight");
        d += w.w[c][0] * std::abs(a.m[0][c] - b.m[0][c]) +
             w.w[c][1] * std::abs(a.m[1][c] - b.m[1][c]) +
             w.w[c][2] * std::abs(a.m[2][c] - b.m[2][c]);
    }
    return d;
}

MomentsDecision classify_moments(const Region& region, const Image& img,
                                 const MomentsMatrix& model_a,
                                 const MomentsMatrix& model_b,
                                 const WeightMatrix& w) {
    MomentsMatrix m = color_moments(region, img);
    double da = dmom(m, model_a, w);
    double db = dmom(m, model_b, w);
    if (da == db) throw TieError(da, db);
    return {da < db ? "A" : "B", da, db};
}

} // namespace teamseg
