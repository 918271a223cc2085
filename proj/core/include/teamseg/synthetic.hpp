#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "teamseg/image.hpp"

namespace teamseg {

// Deterministic test sequence: a textured static field, team-colored
// rectangles bouncing horizontally in separate lanes, each casting a shadow
// (the field scaled by shadow_strength, chromaticity untouched), plus
// per-frame Gaussian pixel noise. background_frames player-free frames are
// emitted first so a background model has clean history to train on.
struct SyntheticSpec {
    int width = 320;
    int height = 240;
    std::array<uint8_t, 3> field_color{60, 140, 70};
    std::vector<std::array<uint8_t, 3>> team_colors{{200, 60, 30}, {30, 120, 200}};
    int rect_count = 4;
    int rect_width = 24;
    int rect_height = 36;
    int speed = 3; // horizontal px/frame
    double shadow_strength = 0.5;
    double noise_sigma = 2.0;
    int frames = 20;            // frames with players
    int background_frames = 0;  // player-free lead-in
    uint64_t seed = 1;
};

struct TruthRegion {
    int frame;
    std::array<int, 4> rect; // x, y, w, h
    int class_id;            // 1-based team index
};

struct SyntheticFrame {
    Image image;
    Mask truth; // kBackground / kShadow / kForeground
    std::vector<TruthRegion> regions;
};

struct SyntheticSequence {
    SyntheticSpec spec;
    std::vector<SyntheticFrame> frames;
};

SyntheticSequence gen_synthetic(const SyntheticSpec& spec);

// The noise-free, player-free field (same seed-derived texture the generator
// composites onto), for tests that need generator ground truth.
Image clean_field(const SyntheticSpec& spec);

} // namespace teamseg
