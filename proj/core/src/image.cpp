#include "teamseg/image.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "teamseg/errors.hpp"

namespace teamseg {

size_t Mask::count(uint8_t label) const {
    return size_t(std::count(labels.begin(), labels.end(), label));
}

namespace {

struct ByteReader {
    const std::vector<uint8_t>& buf;
    size_t pos = 0;

    int peek() const { return pos < buf.size() ? buf[pos] : -1; }
    int get() { return pos < buf.size() ? buf[pos++] : -1; }
};

bool is_space(int c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

void skip_space_and_comments(ByteReader& r) {
    for (;;) {
        int c = r.peek();
        if (c == '#') {
            while (c != -1 && c != '\n') c = r.get();
        } else if (is_space(c)) {
            r.get();
        } else {
            return;
        }
    }
}

long read_header_int(ByteReader& r, const char* magic, const char* field) {
    skip_space_and_comments(r);
    int c = r.peek();
    if (c < '0' || c > '9')
        throw FormatError(std::string(magic) + ": invalid " + field);
    long v = 0;
    while (c >= '0' && c <= '9') {
        v = v * 10 + (c - '0');
        if (v > 1000000000)
            throw FormatError(std::string(magic) + ": " + field + " out of range");
        r.get();
        c = r.peek();
    }
    return v;
}

// Shared P5/P6 header handling. Returns the offset of the raster.
struct PnmHeader {
    int width;
    int height;
    size_t data_pos;
};

PnmHeader read_header(ByteReader& r, char digit, const char* magic) {
    if (r.get() != 'P' || r.get() != digit)
        throw FormatError(std::string(magic) + ": bad magic, expected " + magic);
    long w = read_header_int(r, magic, "width");
    long h = read_header_int(r, magic, "height");
    long maxval = read_header_int(r, magic, "maxval");
    if (w < 1) throw FormatError(std::string(magic) + ": invalid width");
    if (h < 1) throw FormatError(std::string(magic) + ": invalid height");
    if (maxval != 255)
        throw FormatError(std::string(magic) + ": maxval " + std::to_string(maxval) +
                          " unsupported, expected 255");
    int c = r.get();
    if (!is_space(c))
        throw FormatError(std::string(magic) + ": missing whitespace after maxval");
    return {int(w), int(h), r.pos};
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(f),
                                std::istreambuf_iterator<char>());
}

void write_file(const std::vector<uint8_t>& bytes, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
    if (!f) throw FormatError("write failed: " + path);
}

void append_header(std::vector<uint8_t>& out, const char* magic, int w, int h) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "%s\n%d %d\n255\n", magic, w, h);
    out.insert(out.end(), buf, buf + n);
}

} // namespace

Image load_ppm(const std::vector<uint8_t>& bytes) {
    ByteReader r{bytes};
    PnmHeader hd = read_header(r, '6', "ppm");
    size_t need = size_t(hd.width) * hd.height * 3;
    if (bytes.size() - hd.data_pos < need)
        throw FormatError("ppm: truncated pixel data, expected " +
                          std::to_string(need) + " bytes, got " +
                          std::to_string(bytes.size() - hd.data_pos));
    Image img(hd.width, hd.height);
    const uint8_t* p = bytes.data() + hd.data_pos;
    for (size_t i = 0; i < img.pixels(); ++i) {
        img.r[i] = p[3 * i];
        img.g[i] = p[3 * i + 1];
        img.b[i] = p[3 * i + 2];
    }
    return img;
}

std::vector<uint8_t> save_ppm(const Image& img) {
    std::vector<uint8_t> out;
    out.reserve(img.pixels() * 3 + 32);
    append_header(out, "P6", img.width, img.height);
    for (size_t i = 0; i < img.pixels(); ++i) {
        out.push_back(img.r[i]);
        out.push_back(img.g[i]);
        out.push_back(img.b[i]);
    }
    return out;
}

Image load_ppm_file(const std::string& path) {
    try {
        return load_ppm(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void save_ppm_file(const Image& img, const std::string& path) {
    write_file(save_ppm(img), path);
}

Mask load_pgm(const std::vector<uint8_t>& bytes) {
    ByteReader r{bytes};
    PnmHeader hd = read_header(r, '5', "pgm");
    size_t need = size_t(hd.width) * hd.height;
    if (bytes.size() - hd.data_pos < need)
        throw FormatError("pgm: truncated pixel data, expected " +
                          std::to_string(need) + " bytes, got " +
                          std::to_string(bytes.size() - hd.data_pos));
    Mask mask(hd.width, hd.height);
    std::copy_n(bytes.begin() + std::ptrdiff_t(hd.data_pos), need,
                mask.labels.begin());
    return mask;
}

std::vector<uint8_t> save_pgm(const Mask& mask) {
    std::vector<uint8_t> out;
    out.reserve(mask.labels.size() + 32);
    append_header(out, "P5", mask.width, mask.height);
    out.insert(out.end(), mask.labels.begin(), mask.labels.end());
    return out;
}

Mask load_pgm_file(const std::string& path) {
    try {
        return load_pgm(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void save_pgm_file(const Mask& mask, const std::string& path) {
    write_file(save_pgm(mask), path);
}

std::vector<Region> extract_regions(const Mask& mask, int min_area) {
    if (min_area < 1) throw ConfigError("extract_regions: min_area must be >= 1");
    const int w = mask.width, h = mask.height;
    std::vector<uint8_t> seen(size_t(w) * h, 0);
    std::vector<Region> regions;
    std::vector<std::pair<int, int>> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            size_t i = mask.index(x, y);
            if (seen[i] || mask.labels[i] != kForeground) continue;
            Region reg;
            reg.min_x = reg.max_x = x;
            reg.min_y = reg.max_y = y;
            stack.push_back({x, y});
            seen[i] = 1;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                reg.pixels.push_back({cx, cy});
                reg.min_x = std::min(reg.min_x, cx);
                reg.max_x = std::max(reg.max_x, cx);
                reg.min_y = std::min(reg.min_y, cy);
                reg.max_y = std::max(reg.max_y, cy);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        size_t ni = mask.index(nx, ny);
                        if (!seen[ni] && mask.labels[ni] == kForeground) {
                            seen[ni] = 1;
                            stack.push_back({nx, ny});
                        }
                    }
            }
            if (reg.surface() >= min_area) regions.push_back(std::move(reg));
        }
    }
    std::stable_sort(regions.begin(), regions.end(),
                     [](const Region& a, const Region& b) {
                         return a.surface() > b.surface();
                     });
    return regions;
}

Region window_region(int x, int y, int w, int h, int img_w, int img_h) {
    Region reg;
    int x0 = std::max(0, x), y0 = std::max(0, y);
    int x1 = std::min(img_w, x + w), y1 = std::min(img_h, y + h);
    if (x0 >= x1 || y0 >= y1)
        throw ConfigError("window_region: rectangle outside the image");
    reg.min_x = x0;
    reg.min_y = y0;
    reg.max_x = x1 - 1;
    reg.max_y = y1 - 1;
    for (int yy = y0; yy < y1; ++yy)
        for (int xx = x0; xx < x1; ++xx) reg.pixels.push_back({xx, yy});
    return reg;
}

} // namespace teamseg
