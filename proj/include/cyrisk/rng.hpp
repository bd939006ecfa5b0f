#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cyrisk {

// Counter-based hierarchical random stream. A stream is identified by a
// 64-bit key derived from (seed, path); two streams with the same key
// produce the same draw sequence, and child streams are derived purely
// from the parent key, never from the parent's engine state. This makes
// results independent of scheduling and worker count.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(mix(seed)), eng_(engine_seed(key_)) {}

    RngStream child(std::uint64_t index) const {
        return RngStream(key_, mix(key_ ^ mix(index + 0x632be59bd9b4e019ULL)));
    }

    RngStream child(std::string_view label) const {
        std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
        for (unsigned char c : label) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return RngStream(key_, mix(key_ ^ h));
    }

    std::uint64_t key() const { return key_; }
    std::mt19937_64& engine() { return eng_; }

    double uniform01() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    RngStream(std::uint64_t, std::uint64_t derived) : key_(derived), eng_(engine_seed(key_)) {}

    static std::uint64_t engine_seed(std::uint64_t key) { return mix(key ^ 0x2545f4914f6cdd1dULL); }

    std::uint64_t key_;
    std::mt19937_64 eng_;
};

} // namespace cyrisk
