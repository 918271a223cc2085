#include "teamseg/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "teamseg/errors.hpp"
#include "teamseg/log.hpp"

namespace teamseg {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
// Bandwidth scale: the median absolute difference of consecutive samples
// from a Gaussian stream estimates 0.68 * sqrt(2) * sigma.
constexpr double kMedianToSigma = 0.68 * 1.4142135623730951;

// Median; even-length input averages the two middle values. Reorders v.
double median_inplace(std::vector<double>& v) {
    size_t n = v.size();
    auto mid = v.begin() + std::ptrdiff_t(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    double hi = *mid;
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

} // namespace

Mask delimit_pitch(const Image& img, const AffineBoundary& boundary) {
    Mask mask(img.width, img.height, kBackground);
    size_t kept = 0;
    for (int x = 0; x < img.width; ++x) {
        double yu = boundary.upper(double(x));
        double yl = boundary.lower(double(x));
        for (int y = 0; y < img.height; ++y) {
            if (yu < double(y) && double(y) < yl) {
                mask.set(x, y, kForeground);
                ++kept;
            }
        }
    }
    if (kept == 0)
        log::warn("delimit_pitch: boundary keeps no pixels");
    return mask;
}

LevelThresholds histogram_thresholds(const Plane& plane, double valley_frac) {
    int counts[256] = {0};
    for (double v : plane.samples) {
        int bin = int(v * 256.0);
        bin = std::clamp(bin, 0, 255);
        ++counts[bin];
    }
    int peak = 0;
    for (int i = 1; i < 256; ++i)
        if (counts[i] > counts[peak]) peak = i;

    double valley = valley_frac * counts[peak];
    LevelThresholds th{-1, 256};
    for (int i = peak - 1; i >= 0; --i)
        if (counts[i] < valley) {
            th.low = i;
            break;
        }
    for (int i = peak + 1; i < 256; ++i)
        if (counts[i] < valley) {
            th.high = i;
            break;
        }
    return th;
}

Mask histogram_segment(const Image& img, double valley_frac) {
    const ColorLevel levels[3] = {ColorLevel::ChromR, ColorLevel::ChromG,
                                  ColorLevel::ChromB};
    Plane planes[3];
    LevelThresholds th[3];
    bool can_flag = false;
    for (int c = 0; c < 3; ++c) {
        planes[c] = to_level(img, levels[c]);
        th[c] = histogram_thresholds(planes[c], valley_frac);
        if (th[c].low >= 0 || th[c].high <= 255) can_flag = true;
    }
    if (!can_flag)
        log::warn("histogram_segment: thresholds span the full range on every "
                  "level; no foreground possible");

    Mask mask(img.width, img.height, kBackground);
    for (size_t i = 0; i < img.pixels(); ++i) {
        bool fg = true;
        for (int c = 0; c < 3 && fg; ++c) {
            int bin = std::clamp(int(planes[c].samples[i] * 256.0), 0, 255);
            fg = bin <= th[c].low || bin >= th[c].high;
        }
        if (fg) mask.labels[i] = kForeground;
    }
    return mask;
}

double estimate_bandwidth(std::span<const double> samples, double sigma_floor) {
    if (samples.size() < 2)
        throw InsufficientHistoryError(
            "estimate_bandwidth: need at least 2 samples, got " +
            std::to_string(samples.size()));
    std::vector<double> diffs;
    diffs.reserve(samples.size() - 1);
    for (size_t i = 1; i < samples.size(); ++i)
        diffs.push_back(std::abs(samples[i] - samples[i - 1]));
    double m = median_inplace(diffs);
    return std::max(sigma_floor, m / kMedianToSigma);
}

double gaussian_kernel_product(std::span<const double> x,
                               std::span<const double> sample,
                               std::span<const double> sigma) {
    double p = 1.0;
    for (size_t j = 0; j < x.size(); ++j) {
        double d = x[j] - sample[j];
        double s2 = sigma[j] * sigma[j];
        p *= std::exp(-d * d / (2.0 * s2)) / std::sqrt(kTwoPi * s2);
    }
    return p;
}

double kde_density(std::span<const double> x,
                   std::span<const std::vector<double>> samples,
                   std::span<const double> sigma) {
    if (samples.empty())
        throw InsufficientHistoryError("kde_density: no samples");
    double sum = 0.0;
    for (const auto& s : samples)
        sum += gaussian_kernel_product(x, std::span<const double>(s), sigma);
    return sum / double(samples.size());
}

BackgroundModel::BackgroundModel(int width, int height, SegmentationParams params)
    : width_(width), height_(height), params_(params) {
    if (width < 1 || height < 1)
        throw ConfigError("BackgroundModel: empty frame size");
    if (params_.window < 1)
        throw ConfigError("BackgroundModel: window must be >= 1");
    if (!(params_.th > 0.0) || !(params_.th < 1.0))
        throw ConfigError("BackgroundModel: detection threshold must lie in (0, 1)");
    size_t n = size_t(width) * height;
    samples_.assign(n * size_t(params_.window) * 3, 0);
    count_.assign(n, 0);
    head_.assign(n, 0);
    sigma_.assign(n * 3, params_.sigma_floor);
}

void BackgroundModel::update(const Image& frame) {
    if (frame.width != width_ || frame.height != height_)
        throw ConfigError("BackgroundModel::update: frame size mismatch");
    const int n = params_.window;
    std::vector<double> scratch;
    scratch.reserve(size_t(n));
    std::vector<double> diffs;
    diffs.reserve(size_t(n));

    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            size_t p = pixel(x, y);
            uint8_t* buf = &samples_[p * size_t(n) * 3];
            int slot;
            if (count_[p] < n) {
                slot = (head_[p] + count_[p]) % n;
                ++count_[p];
            } else {
                slot = head_[p];
                head_[p] = uint16_t((head_[p] + 1) % n);
            }
            size_t src = frame.index(x, y);
            buf[3 * slot] = frame.r[src];
            buf[3 * slot + 1] = frame.g[src];
            buf[3 * slot + 2] = frame.b[src];

            for (int c = 0; c < 3; ++c) {
                double sig = params_.sigma_floor;
                if (count_[p] >= 2) {
                    diffs.clear();
                    double prev = buf[3 * ((head_[p]) % n) + c];
                    for (int i = 1; i < count_[p]; ++i) {
                        double cur = buf[3 * ((head_[p] + i) % n) + c];
                        diffs.push_back(std::abs(cur - prev));
                        prev = cur;
                    }
                    double m = median_inplace(diffs);
                    sig = std::max(params_.sigma_floor, m / kMedianToSigma);
                }
                sigma_[p * 3 + c] = sig;
            }
        }
    }
}

double BackgroundModel::probability(int x, int y, uint8_t r, uint8_t g,
                                    uint8_t b) const {
    size_t p = pixel(x, y);
    int k = count_[p];
    if (k == 0)
        throw InsufficientHistoryError("no background history at pixel (" +
                                       std::to_string(x) + ", " +
                                       std::to_string(y) + ")");
    const int n = params_.window;
    const uint8_t* buf = &samples_[p * size_t(n) * 3];
    const double xt[3] = {double(r), double(g), double(b)};
    const double sig[3] = {sigma_[p * 3], sigma_[p * 3 + 1], sigma_[p * 3 + 2]};
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        int slot = (head_[p] + i) % n;
        const double sample[3] = {double(buf[3 * slot]), double(buf[3 * slot + 1]),
                                  double(buf[3 * slot + 2])};
        sum += gaussian_kernel_product(xt, sample, sig);
    }
    return sum / double(k);
}

std::array<double, 3> BackgroundModel::bandwidth(int x, int y) const {
    size_t p = pixel(x, y);
    return {sigma_[p * 3], sigma_[p * 3 + 1], sigma_[p * 3 + 2]};
}

std::vector<double> BackgroundModel::channel_history(int x, int y,
                                                     int channel) const {
    size_t p = pixel(x, y);
    const int n = params_.window;
    const uint8_t* buf = &samples_[p * size_t(n) * 3];
    std::vector<double> out;
    out.reserve(count_[p]);
    for (int i = 0; i < count_[p]; ++i)
        out.push_back(buf[3 * ((head_[p] + i) % n) + channel]);
    return out;
}

std::array<double, 3> BackgroundModel::median_background(int x, int y) const {
    size_t p = pixel(x, y);
    if (count_[p] == 0)
        throw InsufficientHistoryError("no background history at pixel (" +
                                       std::to_string(x) + ", " +
                                       std::to_string(y) + ")");
    std::array<double, 3> med{};
    for (int c = 0; c < 3; ++c) {
        std::vector<double> v = channel_history(x, y, c);
        med[c] = median_inplace(v);
    }
    return med;
}

Image BackgroundModel::median_background_image() const {
    Image out(width_, height_);
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x) {
            auto med = median_background(x, y);
            out.set(x, y, uint8_t(std::lround(med[0])), uint8_t(std::lround(med[1])),
                    uint8_t(std::lround(med[2])));
        }
    return out;
}

Mask classify_frame(const BackgroundModel& model, const Image& frame,
                    const Mask& candidates) {
    if (frame.width != model.width() || frame.height != model.height())
        throw ConfigError("classify_frame: frame size mismatch");
    if (candidates.width != frame.width || candidates.height != frame.height)
        throw ConfigError("classify_frame: candidate mask size mismatch");

    const double th = model.params().th;
    Mask mask(frame.width, frame.height, kBackground);
    for (int y = 0; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x) {
            if (candidates.at(x, y) != kForeground) continue;
            size_t i = frame.index(x, y);
            double pr = model.probability(x, y, frame.r[i], frame.g[i], frame.b[i]);
            if (pr < th) mask.set(x, y, kForeground);
        }
    return mask;
}

Mask suppress_shadows(const Image& expected_bg, const Image& frame,
                      const Mask& mask, const SegmentationParams& params) {
    if (expected_bg.width != frame.width || expected_bg.height != frame.height)
        throw ConfigError("suppress_shadows: background size mismatch");
    Mask out = mask;
    for (size_t i = 0; i < frame.pixels(); ++i) {
        if (mask.labels[i] != kForeground) continue;
        double bg_sum = double(expected_bg.r[i]) + expected_bg.g[i] + expected_bg.b[i];
        double s_i = bg_sum / 3.0;
        if (s_i <= 0.0) continue; // no meaningful brightness ratio
        double s_t = (double(frame.r[i]) + frame.g[i] + frame.b[i]) / 3.0;
        double ratio = s_t / s_i;
        if (!(params.shadow_th1 < ratio && ratio < params.shadow_th2)) continue;
        auto ci = chromaticity(expected_bg.r[i], expected_bg.g[i], expected_bg.b[i]);
        auto ct = chromaticity(frame.r[i], frame.g[i], frame.b[i]);
        if (std::abs(ct[0] - ci[0]) < params.shadow_eps_c &&
            std::abs(ct[1] - ci[1]) < params.shadow_eps_c)
            out.labels[i] = kShadow;
    }
    return out;
}

Mask suppress_shadows(const BackgroundModel& model, const Image& frame,
                      const Mask& mask) {
    if (frame.width != model.width() || frame.height != model.height())
        throw ConfigError("suppress_shadows: frame size mismatch");
    Mask out = mask;
    const auto& params = model.params();
    for (int y = 0; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x) {
            size_t i = frame.index(x, y);
            if (mask.labels[i] != kForeground) continue;
            auto med = model.median_background(x, y);
            double s_i = (med[0] + med[1] + med[2]) / 3.0;
            if (s_i <= 0.0) continue;
            double s_t = (double(frame.r[i]) + frame.g[i] + frame.b[i]) / 3.0;
            double ratio = s_t / s_i;
            if (!(params.shadow_th1 < ratio && ratio < params.shadow_th2)) continue;
            auto ci = chromaticity(med[0], med[1], med[2]);
            auto ct = chromaticity(frame.r[i], frame.g[i], frame.b[i]);
            if (std::abs(ct[0] - ci[0]) < params.shadow_eps_c &&
                std::abs(ct[1] - ci[1]) < params.shadow_eps_c)
                out.labels[i] = kShadow;
        }
    return out;
}

} // namespace teamseg
