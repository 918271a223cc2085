#include "teamseg/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "teamseg/errors.hpp"
#include "teamseg/rng.hpp"

namespace teamseg {

namespace {

constexpr int kTextureAmplitude = 6;
constexpr int kLaneGap = 4;
constexpr int kShadowDx = 4;

struct Player {
    int lane_y;
    int x0;
    int dir; // +1 -> starts moving right
    int class_id;
};

int shadow_height(const SyntheticSpec& spec) {
    return std::max(1, spec.rect_height / 2);
}

int lane_height(const SyntheticSpec& spec) {
    return spec.rect_height + shadow_height(spec) + kLaneGap;
}

void validate(const SyntheticSpec& spec) {
    if (spec.width < 1 || spec.height < 1)
        throw ConfigError("synthetic: empty frame size");
    if (spec.team_colors.size() < 2 || spec.team_colors.size() > 4)
        throw ConfigError("synthetic: need 2 to 4 team colors");
    for (size_t i = 0; i < spec.team_colors.size(); ++i)
        for (size_t j = i + 1; j < spec.team_colors.size(); ++j)
            if (spec.team_colors[i] == spec.team_colors[j])
                throw ConfigError("synthetic: duplicate team colors");
    if (!(spec.shadow_strength > 0.0 && spec.shadow_strength < 1.0))
        throw ConfigError("synthetic: shadow_strength must be in (0, 1)");
    if (spec.noise_sigma < 0.0)
        throw ConfigError("synthetic: negative noise_sigma");
    if (spec.rect_count < 0) throw ConfigError("synthetic: negative rect_count");
    if (spec.rect_count > 0) {
        if (spec.rect_width < 1 || spec.rect_height < 1)
            throw ConfigError("synthetic: empty rectangle size");
        if (spec.rect_width > spec.width)
            throw ConfigError("synthetic: rectangle wider than the frame");
        if (spec.rect_count * lane_height(spec) > spec.height)
            throw ConfigError("synthetic: rectangles do not fit the frame height "
                              "(one lane per rectangle)");
    }
    if (spec.frames < 0 || spec.background_frames < 0)
        throw ConfigError("synthetic: negative frame count");
}

// Triangle-wave bounce on [0, range].
int bounce(int x0, int velocity, int t, int range) {
    if (range <= 0) return 0;
    long period = 2L * range;
    long raw = (x0 + long(velocity) * t) % period;
    if (raw < 0) raw += period;
    return int(raw <= range ? raw : period - raw);
}

uint8_t clamp_u8(double v) {
    return uint8_t(std::clamp(v, 0.0, 255.0));
}

std::vector<Player> make_players(const SyntheticSpec& spec, Rng root) {
    Rng prng = root.split("players");
    std::vector<Player> players;
    players.reserve(size_t(spec.rect_count));
    int range = spec.width - spec.rect_width;
    for (int p = 0; p < spec.rect_count; ++p) {
        Player pl;
        pl.lane_y = p * lane_height(spec) + kLaneGap / 2;
        pl.x0 = range > 0 ? prng.uniform_int(0, range) : 0;
        pl.dir = (p % 2 == 0) ? 1 : -1;
        pl.class_id = p % int(spec.team_colors.size()) + 1;
        players.push_back(pl);
    }
    return players;
}

} // namespace

Image clean_field(const SyntheticSpec& spec) {
    validate(spec);
    Rng trng = Rng(spec.seed).split("texture");
    Image field(spec.width, spec.height);
    for (size_t i = 0; i < field.pixels(); ++i) {
        field.r[i] = clamp_u8(spec.field_color[0] +
                              trng.uniform_int(-kTextureAmplitude, kTextureAmplitude));
        field.g[i] = clamp_u8(spec.field_color[1] +
                              trng.uniform_int(-kTextureAmplitude, kTextureAmplitude));
        field.b[i] = clamp_u8(spec.field_color[2] +
                              trng.uniform_int(-kTextureAmplitude, kTextureAmplitude));
    }
    return field;
}

SyntheticSequence gen_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    Rng root(spec.seed);
    Image field = clean_field(spec);
    std::vector<Player> players = make_players(spec, root);
    int range = spec.width - spec.rect_width;
    int sh_h = shadow_height(spec);

    SyntheticSequence seq;
    seq.spec = spec;
    int total = spec.background_frames + spec.frames;
    seq.frames.reserve(size_t(total));

    for (int t = 0; t < total; ++t) {
        SyntheticFrame fr;
        fr.image = field;
        fr.truth = Mask(spec.width, spec.height, kBackground);

        if (t >= spec.background_frames) {
            int tau = t - spec.background_frames;
            std::vector<std::array<int, 4>> rects;
            rects.reserve(players.size());
            for (const Player& pl : players) {
                int x = bounce(pl.x0, pl.dir * spec.speed, tau, range);
                rects.push_back({x, pl.lane_y, spec.rect_width, spec.rect_height});
            }
            // shadows first so player pixels overwrite them
            for (size_t p = 0; p < players.size(); ++p) {
                auto [rx, ry, rw, rh] = rects[p];
                int sx0 = std::clamp(rx + kShadowDx, 0, spec.width);
                int sx1 = std::clamp(rx + kShadowDx + rw, 0, spec.width);
                int sy0 = std::clamp(ry + rh, 0, spec.height);
                int sy1 = std::clamp(ry + rh + sh_h, 0, spec.height);
                for (int y = sy0; y < sy1; ++y)
                    for (int x = sx0; x < sx1; ++x) {
                        size_t i = fr.image.index(x, y);
                        fr.image.r[i] = clamp_u8(std::round(field.r[i] * spec.shadow_strength));
                        fr.image.g[i] = clamp_u8(std::round(field.g[i] * spec.shadow_strength));
                        fr.image.b[i] = clamp_u8(std::round(field.b[i] * spec.shadow_strength));
                        fr.truth.labels[i] = kShadow;
                    }
            }
            for (size_t p = 0; p < players.size(); ++p) {
                auto [rx, ry, rw, rh] = rects[p];
                auto color = spec.team_colors[size_t(players[p].class_id - 1)];
                for (int y = ry; y < ry + rh; ++y)
                    for (int x = rx; x < rx + rw; ++x) {
                        fr.image.set(x, y, color[0], color[1], color[2]);
                        fr.truth.set(x, y, kForeground);
                    }
                fr.regions.push_back({t, rects[p], players[p].class_id});
            }
        }

        if (spec.noise_sigma > 0.0) {
            Rng nrng = root.split("noise").split(uint64_t(t));
            for (size_t i = 0; i < fr.image.pixels(); ++i) {
                fr.image.r[i] = clamp_u8(fr.image.r[i] +
                                         std::round(nrng.normal(0.0, spec.noise_sigma)));
                fr.image.g[i] = clamp_u8(fr.image.g[i] +
                                         std::round(nrng.normal(0.0, spec.noise_sigma)));
                fr.image.b[i] = clamp_u8(fr.image.b[i] +
                                         std::round(nrng.normal(0.0, spec.noise_sigma)));
            }
        }
        seq.frames.push_back(std::move(fr));
    }
    return seq;
}

} // namespace teamseg
