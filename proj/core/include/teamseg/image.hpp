#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace teamseg {

// 8-bit RGB frame, planar row-major storage.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> r, g, b;

    Image() = default;
    Image(int w, int h)
        : width(w), height(h),
          r(size_t(w) * h, 0), g(size_t(w) * h, 0), b(size_t(w) * h, 0) {}

    size_t pixels() const { return size_t(width) * height; }
    size_t index(int x, int y) const { return size_t(y) * width + x; }

    std::array<uint8_t, 3> rgb(int x, int y) const {
        size_t i = index(x, y);
        return {r[i], g[i], b[i]};
    }
    void set(int x, int y, uint8_t rv, uint8_t gv, uint8_t bv) {
        size_t i = index(x, y);
        r[i] = rv;
        g[i] = gv;
        b[i] = bv;
    }

    bool operator==(const Image&) const = default;
};

// Per-pixel segmentation label values. These are also the grayscale values
// written to mask files, so a mask is viewable as-is.
inline constexpr uint8_t kBackground = 0;
inline constexpr uint8_t kShadow = 128;
inline constexpr uint8_t kForeground = 255;

struct Mask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> labels;

    Mask() = default;
    Mask(int w, int h, uint8_t fill = kBackground)
        : width(w), height(h), labels(size_t(w) * h, fill) {}

    size_t index(int x, int y) const { return size_t(y) * width + x; }
    uint8_t at(int x, int y) const { return labels[index(x, y)]; }
    void set(int x, int y, uint8_t v) { labels[index(x, y)] = v; }
    size_t count(uint8_t label) const;

    bool operator==(const Mask&) const = default;
};

// Binary PPM (P6) and PGM (P5), 8-bit only. Parsers accept comments and
// arbitrary header whitespace; writers emit a canonical header.
Image load_ppm(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> save_ppm(const Image& img);
Image load_ppm_file(const std::string& path);
void save_ppm_file(const Image& img, const std::string& path);

Mask load_pgm(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> save_pgm(const Mask& mask);
Mask load_pgm_file(const std::string& path);
void save_pgm_file(const Mask& mask, const std::string& path);

// Connected component of foreground pixels.
struct Region {
    std::vector<std::pair<int, int>> pixels; // (x, y), discovery order
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    int surface() const { return int(pixels.size()); }
};

inline constexpr int kDefaultMinArea = 25;

// 8-connected components of mask pixels labeled kForeground, smaller than
// min_area dropped, sorted by decreasing surface (stable on ties).
std::vector<Region> extract_regions(const Mask& mask, int min_area = kDefaultMinArea);

// All pixels of an axis-aligned rectangle, clipped to the image bounds.
// Convenience for training windows given as (x, y, w, h).
Region window_region(int x, int y, int w, int h, int img_w, int img_h);

} // namespace teamseg
