#pragma once

#include <array>
#include <string>

#include "teamseg/image.hpp"

namespace teamseg {

// Rows: mean, std-dev, skewness. Columns: H, S, V. All population moments
// (1/N); skewness is the signed cube root of the third central moment.
struct MomentsMatrix {
    std::array<std::array<double, 3>, 3> m{};

    double mean(int channel) const { return m[0][channel]; }
    double stddev(int channel) const { return m[1][channel]; }
    double skew(int channel) const { return m[2][channel]; }
};

// Rows: channel (H, S, V). Columns: weight on the mean, std-dev and skewness
// difference. The stock weighting doubles the std-dev term.
struct WeightMatrix {
    std::array<std::array<double, 3>, 3> w;

    static WeightMatrix defaults() {
        return {{{{{1, 2, 1}}, {{1, 2, 1}}, {{1, 2, 1}}}}};
    }
};

MomentsMatrix color_moments(const Region& region, const Image& img);

// Weighted L1 distance between two moment matrices. Symmetric, zero on
// identical matrices, triangle inequality holds; distinct regions can still
// collide (it is a pseudometric).
double dmom(const MomentsMatrix& a, const MomentsMatrix& b, const WeightMatrix& w);

struct MomentsDecision {
    std::string label;
    double dist_a;
    double dist_b;
};

MomentsDecision classify_moments(const Region& region, const Image& img,
                                 const MomentsMatrix& model_a,
                                 const MomentsMatrix& model_b,
                                 const WeightMatrix& w);

} // namespace teamseg
