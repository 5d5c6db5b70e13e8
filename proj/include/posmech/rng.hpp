#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace posmech {

// SplitMix64; used to expand seeds into generator state.
struct SplitMix64 {
    uint64_t s;
    explicit SplitMix64(uint64_t seed) : s(seed) {}
    uint64_t next() {
        uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xCBF29CE484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// xoshiro256** with per-consumer substreams. Stream identity is
// (master seed, substream name, index), so results never depend on
// scheduling or worker count.
class RngStream {
  public:
    RngStream() : RngStream(0, "default", 0) {}
    RngStream(uint64_t master_seed, std::string_view name, uint64_t index) {
        SplitMix64 sm(master_seed ^ fnv1a64(name) ^ (index * 0x9E3779B97F4A7C15ULL + 0x1ULL));
        for (auto& w : s_) w = sm.next();
        have_cached_ = false;
        cached_ = 0.0;
    }

    uint64_t next_u64() {
        uint64_t r = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return r;
    }

    // Uniform on [0,1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; pairs cached per stream.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 1.0 - uniform();  // (0,1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // Exponential with the given rate (mean 1/rate).
    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    double cached_;
    bool have_cached_;
};

}  // namespace posmech
