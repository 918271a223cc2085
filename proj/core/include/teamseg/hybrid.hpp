#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "teamseg/color.hpp"
#include "teamseg/image.hpp"

namespace teamseg {

struct LevelScore {
    ColorLevel level;
    double criterion;
};

// Min/max of a level over the training windows; values are rescaled with
// these constants before any distance is computed.
struct LevelNorm {
    double lo = 0.0;
    double hi = 1.0;

    double apply(double x) const { return hi > lo ? (x - lo) / (hi - lo) : 0.0; }
};

// The three most discriminant levels plus the full ranking they were picked
// from and the normalization fitted on the training windows.
struct HybridSpace {
    std::array<ColorLevel, 3> levels;
    std::array<LevelNorm, 3> norms;
    std::vector<LevelScore> ranking; // all levels, criterion descending
};

struct TeamModel {
    std::string label;
    std::array<double, 3> mean; // in normalized hybrid-space coordinates
};

double region_mean(const Region& region, const Plane& plane);

// Separation criterion for one level: between-team mean distance minus the
// within-team mean distance, both on normalized values. Positive means the
// level separates the teams more than it scatters one of them.
double discriminant(double mean_1a, double mean_2a, double mean_1b);

// Ranks every level by the criterion computed from two windows of team A and
// one of team B; ties keep declaration order. Warns when nothing scores
// positive; throws when the windows are indistinguishable on every level.
HybridSpace select_hybrid_space(const Image& img, const Region& j1a,
                                const Region& j2a, const Region& j1b);

// Normalized per-level means of a region in the selected space.
std::array<double, 3> region_coordinates(const Region& region, const Image& img,
                                         const HybridSpace& space);

TeamModel make_team_model(const std::string& label, const Image& img,
                          std::span<const Region> windows,
                          const HybridSpace& space);

struct HybridDecision {
    std::string label;
    double dist_a;
    double dist_b;
};

// Euclidean nearest model in hybrid-space coordinates; an exact tie throws
// TieError carrying both distances.
HybridDecision classify_hybrid_means(const std::array<double, 3>& coords,
                                     const TeamModel& a, const TeamModel& b);
HybridDecision classify_hybrid(const Region& region, const Image& img,
                               const HybridSpace& space, const TeamModel& a,
                               const TeamModel& b);

} // namespace teamseg
