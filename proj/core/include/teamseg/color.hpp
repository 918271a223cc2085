#pragma once

#include <array>
#include <string>
#include <vector>

#include "teamseg/image.hpp"

namespace teamseg {

// The 20 chromatic levels a hybrid color space is assembled from: raw RGB,
// brightness-normalized chromaticities, CIE XYZ, Ohta's components, YIQ,
// the YUV chrominance pair, and a luminance/tint/saturation triple.
// Declaration order doubles as the tie-break order when ranking criteria
// are equal, so do not reorder.
enum class ColorLevel {
    Red, Green, Blue,
    ChromR, ChromG, ChromB,
    CieX, CieY, CieZ,
    Ohta1, Ohta2, Ohta3,
    LumaY, InPhase, Quadrature,
    ChromU, ChromV,
    Luminance, Tint, Saturation,
};

inline constexpr int kColorLevelCount = 20;

inline constexpr std::array<ColorLevel, kColorLevelCount> kColorLevels = {
    ColorLevel::Red,       ColorLevel::Green,      ColorLevel::Blue,
    ColorLevel::ChromR,    ColorLevel::ChromG,     ColorLevel::ChromB,
    ColorLevel::CieX,      ColorLevel::CieY,       ColorLevel::CieZ,
    ColorLevel::Ohta1,     ColorLevel::Ohta2,      ColorLevel::Ohta3,
    ColorLevel::LumaY,     ColorLevel::InPhase,    ColorLevel::Quadrature,
    ColorLevel::ChromU,    ColorLevel::ChromV,     ColorLevel::Luminance,
    ColorLevel::Tint,      ColorLevel::Saturation,
};

// Short unique token for CSV/JSON output ("R", "V", "B", "r", "v", "b", ...).
// The YUV chrominance v is spelled "v'" to keep it distinct from the
// normalized-green chromaticity "v".
const char* level_name(ColorLevel level);
ColorLevel parse_level(const std::string& token);

// Scalar value of one level for one pixel. Raw channels keep their 0..255
// scale, chromaticities live in [0,1]; no global normalization here.
double apply_level(ColorLevel level, uint8_t r, uint8_t g, uint8_t b);

struct Plane {
    int width = 0;
    int height = 0;
    std::vector<double> samples; // row-major

    size_t index(int x, int y) const { return size_t(y) * width + x; }
    double at(int x, int y) const { return samples[index(x, y)]; }
};

Plane to_level(const Image& img, ColorLevel level);

// r/g/b brightness-normalized chromaticities; black maps to (1/3, 1/3, 1/3).
std::array<double, 3> chromaticity(double r, double g, double b);

struct Hsv {
    double h, s, v; // all in [0, 1]; achromatic pixels get h = 0
};

Hsv rgb_to_hsv(uint8_t r, uint8_t g, uint8_t b);

} // namespace teamseg
