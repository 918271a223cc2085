#include "teamseg/color.hpp"

#include <cmath>

#include "teamseg/errors.hpp"

namespace teamseg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// SMPTE-C RGB -> CIE XYZ (D65 white point).
constexpr double kXyz[3][3] = {
    {0.3935891, 0.3652497, 0.1916313},
    {0.2124132, 0.7010437, 0.0865432},
    {0.0187423, 0.1119313, 0.9581563},
};

inline double luma601(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

constexpr const char* kLevelNames[kColorLevelCount] = {
    "R", "V", "B", "r", "v", "b", "X", "Y", "Z", "I1",
    "I2", "I3", "y", "i", "q", "u", "v'", "l", "t", "s",
};

} // namespace

const char* level_name(ColorLevel level) {
    return kLevelNames[int(level)];
}

ColorLevel parse_level(const std::string& token) {
    for (int i = 0; i < kColorLevelCount; ++i)
        if (token == kLevelNames[i]) return ColorLevel(i);
    throw ConfigError("unknown color level '" + token + "'");
}

std::array<double, 3> chromaticity(double r, double g, double b) {
    double sum = r + g + b;
    if (sum <= 0.0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return {r / sum, g / sum, b / sum};
}

double apply_level(ColorLevel level, uint8_t r8, uint8_t g8, uint8_t b8) {
    double r = r8, g = g8, b = b8;
    switch (level) {
        case ColorLevel::Red: return r;
        case ColorLevel::Green: return g;
        case ColorLevel::Blue: return b;
        case ColorLevel::ChromR: return chromaticity(r, g, b)[0];
        case ColorLevel::ChromG: return chromaticity(r, g, b)[1];
        case ColorLevel::ChromB: return chromaticity(r, g, b)[2];
        case ColorLevel::CieX:
            return kXyz[0][0] * r + kXyz[0][1] * g + kXyz[0][2] * b;
        case ColorLevel::CieY:
            return kXyz[1][0] * r + kXyz[1][1] * g + kXyz[1][2] * b;
        case ColorLevel::CieZ:
            return kXyz[2][0] * r + kXyz[2][1] * g + kXyz[2][2] * b;
        case ColorLevel::Ohta1: return (r + g + b) / 3.0;
        case ColorLevel::Ohta2: return (r - b) / 2.0;
        case ColorLevel::Ohta3: return (2.0 * g - r - b) / 4.0;
        case ColorLevel::LumaY: return luma601(r, g, b);
        case ColorLevel::InPhase:
            return 0.595716 * r - 0.274453 * g - 0.321263 * b;
        case ColorLevel::Quadrature:
            return 0.211456 * r - 0.522591 * g + 0.311135 * b;
        case ColorLevel::ChromU: return 0.492 * (b - luma601(r, g, b));
        case ColorLevel::ChromV: return 0.877 * (r - luma601(r, g, b));
        case ColorLevel::Luminance: return (r + g + b) / 3.0;
        case ColorLevel::Tint: {
            // Hue angle of the color plane, wrapped into [0, 1); gray (and
            // black) has no hue and maps to 0.
            double yy = std::sqrt(3.0) * (g - b);
            double xx = 2.0 * r - g - b;
            if (yy == 0.0 && xx == 0.0) return 0.0;
            double t = std::atan2(yy, xx) / (2.0 * kPi);
            if (t < 0.0) t += 1.0;
            return t;
        }
        case ColorLevel::Saturation: {
            double mean = (r + g + b) / 3.0;
            if (mean <= 0.0) return 0.0;
            return 1.0 - std::min(std::min(r, g), b) / mean;
        }
    }
    throw ConfigError("apply_level: bad level");
}

Plane to_level(const Image& img, ColorLevel level) {
    Plane p;
    p.width = img.width;
    p.height = img.height;
    p.samples.resize(img.pixels());
    for (size_t i = 0; i < img.pixels(); ++i)
        p.samples[i] = apply_level(level, img.r[i], img.g[i], img.b[i]);
    return p;
}

Hsv rgb_to_hsv(uint8_t r8, uint8_t g8, uint8_t b8) {
    double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    double maxc = std::max(std::max(r, g), b);
    double minc = std::min(std::min(r, g), b);
    double delta = maxc - minc;
    Hsv out{0.0, 0.0, maxc};
    if (maxc > 0.0) out.s = delta / maxc;
    if (delta > 0.0) {
        double h6;
        if (maxc == r) {
            h6 = (g - b) / delta;
            if (h6 < 0.0) h6 += 6.0;
        } else if (maxc == g) {
            h6 = (b - r) / delta + 2.0;
        } else {
            h6 = (r - g) / delta + 4.0;
        }
        out.h = h6 / 6.0;
    }
    return out;
}

} // namespace teamseg
