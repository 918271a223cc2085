#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "teamseg/image.hpp"

namespace teamseg {

struct Trapezoid {
    double a, b, c, d; // feet a/d, shoulders b/c; a <= b <= c <= d

    // 1 on [b, c], 0 outside (a, d), linear in between.
    double membership(double x) const;
};

struct Triangle {
    double left, apex, right;

    double membership(double x) const;
};

// Mamdani system over region color features. Inputs are the green and blue
// channel means (the red mean is carried in the feature vector but stays out
// of the rule base: it does not separate the teams). One rule per team ANDs
// that team's terms; output terms are symmetric triangles on [0, 1].
struct FuzzyInput {
    std::string name;
    Trapezoid team_a;
    Trapezoid team_b;
};

struct FuzzySystem {
    std::vector<FuzzyInput> inputs; // green_moy, blue_moy
    Triangle out_a{0.0, 0.25, 0.5};
    Triangle out_b{0.5, 0.75, 1.0};
    int grid = 101; // centroid evaluation points on [0, 1]
};

// Feature vector of a region: (red_moy, green_moy, blue_moy).
std::array<double, 3> mean_rgb(const Region& region, const Image& img);

// Fits each input's two trapezoids from class percentiles: shoulders at the
// 25th/75th, feet at the 5th/95th. Warns when a class collapses to a spike.
// Needs at least two samples per class.
FuzzySystem fit_memberships(std::span<const std::array<double, 3>> class_a,
                            std::span<const std::array<double, 3>> class_b);

struct Memberships {
    double green_a, green_b;
    double blue_a, blue_b;
};

Memberships fuzzify(const std::array<double, 3>& features, const FuzzySystem& sys);

struct FuzzyDecision {
    std::string label;
    double z; // defuzzified output in [0, 1]; A side below 0.5
    double strength_a;
    double strength_b;
};

// Min/max inference, centroid defuzzification on the system grid. Throws
// when no rule fires, and TieError when z lands on 0.5.
FuzzyDecision infer_and_defuzzify(const Memberships& mem, const FuzzySystem& sys);

FuzzyDecision classify_fuzzy(const Region& region, const Image& img,
                             const FuzzySystem& sys);

} // namespace teamseg
