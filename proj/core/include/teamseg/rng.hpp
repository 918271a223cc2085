#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace teamseg {

// Deterministic splittable PRNG (splitmix64 core). Everything random in this
// library flows from one seed through named splits, so adding a consumer
// never shifts the stream another consumer sees, and results are identical
// across platforms (no reliance on std::uniform_*_distribution, whose output
// is implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive range
    int uniform_int(int lo, int hi) {
        return lo + int(next_u64() % uint64_t(hi - lo + 1));
    }

    double normal(double mean, double sigma) {
        double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
        double u2 = uniform();
        return mean + sigma * std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Child stream derived from a label; does not advance this stream, and
    // the same label always yields the same child.
    Rng split(std::string_view label) const {
        uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
        for (char c : label) {
            h ^= uint64_t(uint8_t(c));
            h *= 0x100000001b3ull;
        }
        return Rng(scramble(state_ ^ h));
    }

    Rng split(uint64_t n) const {
        return Rng(scramble(state_ ^ (n * 0xD6E8FEB86659FD93ull + 1)));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) { // Fisher-Yates
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = next_u64() % i;
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static uint64_t scramble(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

} // namespace teamseg
