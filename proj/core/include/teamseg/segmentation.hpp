#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "teamseg/color.hpp"
#include "teamseg/image.hpp"

namespace teamseg {

struct SegmentationParams {
    int window = 50;           // per-pixel history length
    double th = 1e-6;          // density threshold: below it a pixel is foreground
    double sigma_floor = 1.0;  // lower bound for kernel bandwidths
    double shadow_th1 = 0.4;   // brightness-ratio band for shadow relabeling
    double shadow_th2 = 0.9;
    double shadow_eps_c = 0.03; // chromaticity gate for shadow relabeling
    double valley_frac = 0.05;  // histogram valley level, fraction of the peak
    int min_area = kDefaultMinArea;
};

// Pitch boundary: two affine lines y = slope * x + intercept in pixel
// coordinates. Pixels strictly between them (upper(x) < y < lower(x)) are
// candidates; rows on the lines are excluded, so to keep a whole h-row image
// use horizontal(-1, h).
struct AffineBoundary {
    double upper_slope = 0.0;
    double upper_intercept = -1.0;
    double lower_slope = 0.0;
    double lower_intercept = 0.0;

    static AffineBoundary horizontal(double y_upper, double y_lower) {
        return {0.0, y_upper, 0.0, y_lower};
    }
    static AffineBoundary full_frame(int height) {
        return horizontal(-1.0, double(height));
    }

    double upper(double x) const { return upper_slope * x + upper_intercept; }
    double lower(double x) const { return lower_slope * x + lower_intercept; }
};

// Candidate mask: kForeground marks pixels inside the boundary, everything
// else kBackground. Warns if the boundary keeps nothing.
Mask delimit_pitch(const Image& img, const AffineBoundary& boundary);

// Baseline static segmentation: per chromaticity level (r, v, b), a 256-bin
// histogram locates the dominant mode and the nearest bins on each side where
// the count falls below valley_frac * peak. A pixel is foreground only if it
// falls outside the mode's band on all three levels.
Mask histogram_segment(const Image& img, double valley_frac = 0.05);

struct LevelThresholds {
    int low;  // largest bin below the peak under the valley level, -1 if none
    int high; // smallest bin above the peak under the valley level, 256 if none
};

// Exposed so the three per-level masks can be recomputed and AND-ed
// independently of histogram_segment.
LevelThresholds histogram_thresholds(const Plane& plane, double valley_frac = 0.05);

// Kernel bandwidth from the median m of absolute consecutive sample
// differences: sigma = m / (0.68 * sqrt(2)), floored at sigma_floor.
// Needs at least two samples.
double estimate_bandwidth(std::span<const double> samples, double sigma_floor = 1.0);

// Product of per-dimension Gaussian kernels, the building block of the
// density below. Exposed for direct evaluation at any dimension.
double gaussian_kernel_product(std::span<const double> x,
                               std::span<const double> sample,
                               std::span<const double> sigma);

// Mean of gaussian_kernel_product over the sample set: the kernel density
// estimate at x. Dimension is x.size().
double kde_density(std::span<const double> x,
                   std::span<const std::vector<double>> samples,
                   std::span<const double> sigma);

// Per-pixel sliding-window background model: the last `window` color samples
// and per-channel bandwidths re-estimated after every update.
class BackgroundModel {
public:
    BackgroundModel(int width, int height, SegmentationParams params = {});

    // Appends one frame of samples (evicting the oldest once the window is
    // full) and re-estimates every pixel's bandwidths.
    void update(const Image& frame);

    int width() const { return width_; }
    int height() const { return height_; }
    const SegmentationParams& params() const { return params_; }

    int history(int x, int y) const { return count_[pixel(x, y)]; }

    // Background density of a color at a pixel (mean of kernel products over
    // the pixel's history). Throws if the pixel has no samples.
    double probability(int x, int y, uint8_t r, uint8_t g, uint8_t b) const;

    std::array<double, 3> bandwidth(int x, int y) const;

    // Chronological copy of one channel's history, oldest first.
    std::vector<double> channel_history(int x, int y, int channel) const;

    // Per-channel median of the pixel's history: the expected background.
    std::array<double, 3> median_background(int x, int y) const;
    Image median_background_image() const;

private:
    size_t pixel(int x, int y) const { return size_t(y) * width_ + x; }

    int width_, height_;
    SegmentationParams params_;
    std::vector<uint8_t> samples_; // [pixel][slot][channel]
    std::vector<uint16_t> count_;
    std::vector<uint16_t> head_; // oldest slot
    std::vector<double> sigma_;  // [pixel][channel]
};

// Labels candidate pixels foreground where the background density falls
// below the model threshold. Non-candidates pass through as background.
// Throws if a candidate pixel has no history.
Mask classify_frame(const BackgroundModel& model, const Image& frame,
                    const Mask& candidates);

// Relabels foreground pixels as shadow when brightness drops into the
// (th1, th2) band while both r and g chromaticities stay within eps_c of the
// expected background. Background pixels are never touched and no pixel is
// promoted to foreground.
Mask suppress_shadows(const Image& expected_bg, const Image& frame,
                      const Mask& mask, const SegmentationParams& params);
Mask suppress_shadows(const BackgroundModel& model, const Image& frame,
                      const Mask& mask);

} // namespace teamseg
